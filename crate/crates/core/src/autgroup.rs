//! Automorphism groups of finite p-groups, isomorphism testing, and
//! canonical fingerprints.
//!
//! The order and a generating set of Aut(G) are computed by lifting along
//! the lower p-central series: Aut of the class-1 quotient is the full
//! general linear group; at each step the liftable automorphisms are the
//! stabilizer of the next allowable subgroup in the action on the
//! multiplicator of the cover, and the kernel consists of central maps
//! a_i -> a_i z_i whose exponent-sum conditions form a small linear
//! system. A brute-force generator-image search doubles as the oracle for
//! small orders.

use crate::cover::{natural_epi, p_cover, CoverData};
use crate::fp::{self, FpSubspace};
use crate::pcgroup::{extend_images, is_homomorphism, Element, PcGroup};
use crate::{Error, Result};
use num::BigUint;
use std::collections::HashMap;
use std::sync::Arc;

/// An automorphism stored by the images of all pc generators.
#[derive(Clone, PartialEq, Eq)]
pub struct Automorphism {
    pub images: Vec<Element>,
}

impl Automorphism {
    pub fn identity(g: &PcGroup) -> Self {
        Automorphism {
            images: (0..g.ngens()).map(|i| g.gen(i)).collect(),
        }
    }

    pub fn apply(&self, g: &PcGroup, x: &Element) -> Element {
        g.apply_images(&self.images, x)
    }

    /// self after other: x -> self(other(x)).
    pub fn compose(&self, g: &PcGroup, other: &Automorphism) -> Automorphism {
        Automorphism {
            images: other.images.iter().map(|x| self.apply(g, x)).collect(),
        }
    }

    pub fn key(&self) -> Vec<u8> {
        let mut k = Vec::new();
        for img in &self.images {
            k.extend_from_slice(img.exponents());
        }
        k
    }

    pub fn is_identity(&self, g: &PcGroup) -> bool {
        (0..g.ngens()).all(|i| self.images[i] == g.gen(i))
    }

    /// Inverse by layerwise linear solving along the weight filtration.
    pub fn inverse(&self, g: &PcGroup) -> Automorphism {
        assert!(g.is_weighted(), "inverse needs a standardized group");
        let p = g.prime();
        let class = g.weights().last().copied().unwrap_or(0);
        let mut layers: Vec<Vec<usize>> = vec![Vec::new(); class as usize];
        for t in 0..g.ngens() {
            layers[g.weight(t) as usize - 1].push(t);
        }
        let mut inv_mats: Vec<Vec<Vec<u8>>> = Vec::with_capacity(class as usize);
        for pos in &layers {
            let mat: Vec<Vec<u8>> = pos
                .iter()
                .map(|&t| {
                    let img = &self.images[t];
                    pos.iter().map(|&j| img.exponent(j)).collect()
                })
                .collect();
            inv_mats.push(
                fp::invert_matrix(&mat, p).expect("automorphism acts invertibly on each layer"),
            );
        }
        let solve = |target: &Element| -> Element {
            let mut x = g.identity();
            for (k, pos) in layers.iter().enumerate() {
                let cur = self.apply(g, &x);
                let delta = g.mul(&g.inv(&cur), target);
                if delta.is_identity() {
                    break;
                }
                let v: Vec<u8> = pos.iter().map(|&t| delta.exponent(t)).collect();
                let u = fp::mat_vec(&inv_mats[k], &v, p);
                let mut y = g.identity();
                for (idx, &t) in pos.iter().enumerate() {
                    y.set_exponent(t, u[idx]);
                }
                x = g.mul(&x, &y);
            }
            debug_assert_eq!(self.apply(g, &x), *target);
            x
        };
        let min_imgs: Vec<Element> = (0..g.rank()).map(|i| solve(&g.gen(i))).collect();
        let images = extend_images(g, g, &min_imgs).expect("inverse extends");
        debug_assert!(is_homomorphism(g, g, &images));
        Automorphism { images }
    }
}

/// Aut(G) data: exact order and a generating set.
pub struct AutGroup {
    pub group: Arc<PcGroup>,
    pub order: BigUint,
    pub gens: Vec<Automorphism>,
}

impl AutGroup {
    pub fn order_u128(&self) -> Option<u128> {
        let digits = self.order.to_u64_digits();
        match digits.len() {
            0 => Some(0),
            1 => Some(digits[0] as u128),
            2 => Some(digits[0] as u128 | (digits[1] as u128) << 64),
            _ => None,
        }
    }
}

fn primitive_root(p: u8) -> u8 {
    'outer: for z in 2..p {
        let mut x = 1u64;
        for k in 1..p as u64 - 1 {
            x = x * z as u64 % p as u64;
            if x == 1 && k < p as u64 - 1 {
                continue 'outer;
            }
        }
        return z;
    }
    1
}

/// Generators of GL(d, p) as automorphisms of the elementary abelian
/// class-1 quotient: adjacent transvections plus a diagonal of primitive
/// determinant.
fn gl_generators(q1: &Arc<PcGroup>) -> Vec<Automorphism> {
    let d = q1.ngens();
    let p = q1.prime();
    let mut mats: Vec<Vec<Vec<u8>>> = Vec::new();
    let ident = |d: usize| -> Vec<Vec<u8>> {
        (0..d)
            .map(|i| (0..d).map(|j| u8::from(i == j)).collect())
            .collect()
    };
    if d >= 2 {
        for i in 0..d - 1 {
            let mut m = ident(d);
            m[i][i + 1] = 1;
            mats.push(m);
            let mut m = ident(d);
            m[i + 1][i] = 1;
            mats.push(m);
        }
    }
    let mut m = ident(d);
    if d >= 1 {
        m[0][0] = primitive_root(p);
    }
    mats.push(m);
    mats.into_iter()
        .map(|m| Automorphism {
            images: (0..d)
                .map(|i| {
                    let mut x = q1.identity();
                    for j in 0..d {
                        x.set_exponent(j, m[i][j]);
                    }
                    x
                })
                .collect(),
        })
        .collect()
}

fn gl_order(d: usize, p: u8) -> BigUint {
    let pd = BigUint::from(p).pow(d as u32);
    let mut ord = BigUint::from(1u32);
    for i in 0..d {
        ord *= &pd - BigUint::from(p).pow(i as u32);
    }
    ord
}

/// Action of an automorphism of the base on the multiplicator of its
/// cover, as a matrix in tail coordinates (row i = image of tail i).
pub fn mult_action(cov: &CoverData, auto: &Automorphism) -> Result<Vec<Vec<u8>>> {
    let n = cov.base.ngens();
    let d = cov.base.rank();
    let mut min_imgs = Vec::with_capacity(d);
    for i in 0..d {
        let img = &auto.images[i];
        let mut e = Element::identity(cov.cover.ngens());
        for (k, f) in img.factors() {
            e.set_exponent(k, f);
        }
        min_imgs.push(e);
    }
    let ext = extend_images(&cov.cover, &cov.cover, &min_imgs)?;
    let q = cov.multiplicator_rank;
    let mut mat = Vec::with_capacity(q);
    for t in 0..q {
        let img = &ext[n + t];
        debug_assert!(img.exponents()[..n].iter().all(|&e| e == 0));
        mat.push(cov.tail_coords(img));
    }
    Ok(mat)
}

/// Exponent-sum conditions for the central maps a_i -> a_i z_i: one row
/// per relation, columns the d minimal generators.
fn central_condition_matrix(g: &PcGroup) -> Vec<Vec<u8>> {
    let d = g.rank();
    let p = g.prime() as u16;
    let mut rows = Vec::new();
    let mut row_of = |w: &crate::pcgroup::Word| {
        let mut row = vec![0u8; d];
        for &(i, e) in &w.0 {
            if (i as usize) < d {
                row[i as usize] = ((row[i as usize] as u16 + e as u16) % p) as u8;
            }
        }
        if row.iter().any(|&x| x != 0) {
            rows.push(row);
        }
    };
    for i in 0..g.ngens() {
        row_of(g.power_word(i));
    }
    for j in 1..g.ngens() {
        for i in 0..j {
            row_of(g.comm_word(j, i));
        }
    }
    rows
}

/// Central automorphisms a_i -> a_i z_i with z_i in the deepest weight
/// layer: the kernel of restriction to the previous class quotient.
fn central_kernel_gens(g: &Arc<PcGroup>) -> (u32, Vec<Automorphism>) {
    let d = g.rank();
    let p = g.prime();
    let class = g.weights().last().copied().unwrap_or(0);
    let zpos: Vec<usize> = (0..g.ngens()).filter(|&t| g.weight(t) == class).collect();
    let mk = zpos.len();
    if d == 0 || mk == 0 || class < 2 {
        return (0, vec![]);
    }
    let e_rows = central_condition_matrix(g);
    let vkernel = fp::kernel_basis(&e_rows, d, p);
    let mut gens = Vec::new();
    for v in &vkernel {
        for &z in &zpos {
            let mut min_imgs: Vec<Element> = (0..d).map(|i| g.gen(i)).collect();
            for i in 0..d {
                if v[i] != 0 {
                    let mut zi = g.identity();
                    zi.set_exponent(z, v[i]);
                    min_imgs[i] = g.mul(&min_imgs[i], &zi);
                }
            }
            let images = extend_images(g, g, &min_imgs).expect("central map extends");
            debug_assert!(is_homomorphism(g, g, &images));
            gens.push(Automorphism { images });
        }
    }
    let dim = (vkernel.len() * mk) as u32;
    (dim, gens)
}

/// Automorphism group by layerwise lifting.
pub fn aut_group(g: &Arc<PcGroup>) -> Result<AutGroup> {
    Ok(aut_ladder(g, false)?.0)
}

/// Layerwise lifting, optionally carrying a generator-inverting involution
/// along: at every level some conjugate of the current involution must
/// stabilize the allowable subgroup, otherwise no such involution exists
/// on any deeper quotient (all order-2 lifts of inversion are conjugate).
pub fn aut_ladder(
    g: &Arc<PcGroup>,
    want_sigma: bool,
) -> Result<(AutGroup, Option<Automorphism>)> {
    if g.ngens() == 0 {
        let sigma = want_sigma.then(|| Automorphism { images: vec![] });
        return Ok((
            AutGroup {
                group: g.clone(),
                order: BigUint::from(1u32),
                gens: vec![],
            },
            sigma,
        ));
    }
    assert!(g.is_weighted(), "aut_group needs a standardized group");
    let p = g.prime();
    let d = g.rank();
    let class = g.weights().last().copied().unwrap_or(1);
    let mut q = Arc::new(g.truncate_class(1)?);
    let mut order = gl_order(d, p);
    let mut gens = gl_generators(&q);
    // Inversion on the elementary abelian class-1 quotient.
    let mut sigma: Option<Automorphism> = want_sigma.then(|| Automorphism {
        images: (0..d).map(|i| q.pow(&q.gen(i), p as u32 - 1)).collect(),
    });
    for k in 1..class {
        let qnext = Arc::new(g.truncate_class(k + 1)?);
        let cov = p_cover(&q)?;
        let psi = natural_epi(&cov, &qnext)?;
        // Allowable subgroup: kernel of psi on the multiplicator.
        let zpos: Vec<usize> = (0..qnext.ngens())
            .filter(|&t| qnext.weight(t) == k + 1)
            .collect();
        let qrank = cov.multiplicator_rank;
        let tail_rows: Vec<Vec<u8>> = (0..qrank)
            .map(|t| {
                let img = &psi[cov.base.ngens() + t];
                zpos.iter().map(|&z| img.exponent(z)).collect()
            })
            .collect();
        let mnext = FpSubspace::from_rows(qrank, fp::kernel_basis_left(&tail_rows, p), p);
        debug_assert_eq!(mnext.dim(), qrank - zpos.len());
        // Orbit-stabilizer on the subspace under the matrix action; the
        // kernel of the action stabilizes everything, so generators whose
        // matrices coincide contribute a cheap correction generator.
        let mut mat_of: Vec<(Vec<Vec<u8>>, usize)> = Vec::new();
        let mut seen_mats: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut corrections: Vec<(usize, usize)> = Vec::new();
        for (gi, a) in gens.iter().enumerate() {
            let m = mult_action(&cov, a)?;
            let key: Vec<u8> = m.iter().flatten().copied().collect();
            match seen_mats.get(&key) {
                Some(&rep) => corrections.push((gi, rep)),
                None => {
                    seen_mats.insert(key, gi);
                    mat_of.push((m, gi));
                }
            }
        }
        let mut transversal: HashMap<Vec<u8>, Automorphism> = HashMap::new();
        let idq = Automorphism::identity(&q);
        transversal.insert(mnext.key(), idq.clone());
        let mut frontier = vec![mnext.clone()];
        let mut orbit_elems = vec![mnext.clone()];
        while let Some(u) = frontier.pop() {
            let tu = transversal.get(&u.key()).unwrap().clone();
            for (m, gi) in &mat_of {
                let v = u.apply(m, p);
                if !transversal.contains_key(&v.key()) {
                    transversal.insert(v.key(), gens[*gi].compose(&q, &tu));
                    frontier.push(v.clone());
                    orbit_elems.push(v);
                }
            }
        }
        let orbit_len = transversal.len() as u64;
        // Schreier generators of the stabilizer plus matrix-coincidence
        // corrections; then lift everything through the cover.
        let mut stab: Vec<Automorphism> = Vec::new();
        let mut stab_keys: HashMap<Vec<u8>, ()> = HashMap::new();
        let mut push_stab = |stab: &mut Vec<Automorphism>,
                             stab_keys: &mut HashMap<Vec<u8>, ()>,
                             a: Automorphism,
                             q: &PcGroup| {
            if a.is_identity(q) {
                return;
            }
            let key = a.key();
            if !stab_keys.contains_key(&key) {
                stab_keys.insert(key, ());
                stab.push(a);
            }
        };
        let inv_cache: HashMap<Vec<u8>, Automorphism> = transversal
            .iter()
            .map(|(k, a)| (k.clone(), a.inverse(&q)))
            .collect();
        for u in &orbit_elems {
            let tu = transversal.get(&u.key()).unwrap();
            for (m, gi) in &mat_of {
                let v = u.apply(m, p);
                let tvinv = inv_cache.get(&v.key()).unwrap();
                let schreier = tvinv.compose(&q, &gens[*gi].compose(&q, tu));
                push_stab(&mut stab, &mut stab_keys, schreier, &q);
            }
        }
        // Generators acting trivially on the multiplicator lie in the
        // kernel of the action; their full Schreier set is the set of
        // transversal conjugates.
        for (gi, rep) in &corrections {
            let repinv = gens[*rep].inverse(&q);
            let c = repinv.compose(&q, &gens[*gi]);
            for u in &orbit_elems {
                let tu = transversal.get(&u.key()).unwrap();
                let tuinv = inv_cache.get(&u.key()).unwrap();
                let conj = tuinv.compose(&q, &c.compose(&q, tu));
                push_stab(&mut stab, &mut stab_keys, conj, &q);
            }
        }
        let mut next_gens: Vec<Automorphism> = Vec::new();
        let mut next_keys: HashMap<Vec<u8>, ()> = HashMap::new();
        for a in std::iter::once(&idq).chain(stab.iter()) {
            let dmin = q.rank();
            let mut min_imgs = Vec::with_capacity(dmin);
            for i in 0..dmin {
                let img = &a.images[i];
                let mut e = Element::identity(cov.cover.ngens());
                for (kk, f) in img.factors() {
                    e.set_exponent(kk, f);
                }
                min_imgs.push(e);
            }
            let ext = extend_images(&cov.cover, &cov.cover, &min_imgs)?;
            let lifted_min: Vec<Element> = (0..dmin)
                .map(|i| qnext.apply_images(&psi, &ext[i]))
                .collect();
            let images = extend_images(&qnext, &qnext, &lifted_min)?;
            if !is_homomorphism(&qnext, &qnext, &images) {
                return Err(Error::Structural(
                    "stabilizer generator failed to lift".into(),
                ));
            }
            let lifted = Automorphism { images };
            if !lifted.is_identity(&qnext) && !next_keys.contains_key(&lifted.key()) {
                next_keys.insert(lifted.key(), ());
                next_gens.push(lifted);
            }
        }
        let (ker_dim, ker_gens) = central_kernel_gens(&qnext);
        for a in ker_gens {
            if !next_keys.contains_key(&a.key()) {
                next_keys.insert(a.key(), ());
                next_gens.push(a);
            }
        }
        // Carry the involution: find an orbit point fixed by its action,
        // conjugate the involution to stabilize the allowable subgroup,
        // lift, and extract the order-2 part by odd powering.
        if let Some(s) = sigma.take() {
            let smat = mult_action(&cov, &s)?;
            let fixed_pt = orbit_elems.iter().find(|u| u.apply(&smat, p) == **u);
            sigma = match fixed_pt {
                None => None,
                Some(u) => {
                    let tu = transversal.get(&u.key()).unwrap();
                    let conj = tu
                        .inverse(&q)
                        .compose(&q, &s.compose(&q, tu));
                    let mut min_imgs = Vec::with_capacity(q.rank());
                    for i in 0..q.rank() {
                        let img = &conj.images[i];
                        let mut e = Element::identity(cov.cover.ngens());
                        for (kk, f) in img.factors() {
                            e.set_exponent(kk, f);
                        }
                        min_imgs.push(e);
                    }
                    let ext = extend_images(&cov.cover, &cov.cover, &min_imgs)?;
                    let lifted_min: Vec<Element> = (0..q.rank())
                        .map(|i| qnext.apply_images(&psi, &ext[i]))
                        .collect();
                    let images = extend_images(&qnext, &qnext, &lifted_min)?;
                    if !is_homomorphism(&qnext, &qnext, &images) {
                        return Err(Error::Structural(
                            "involution failed to lift through the cover".into(),
                        ));
                    }
                    let mut tau = Automorphism { images };
                    // ord(tau) = 2 * p^j; the p^j-th power has order 2 and
                    // the same restriction (odd power of an involution).
                    loop {
                        let sq = tau.compose(&qnext, &tau);
                        if sq.is_identity(&qnext) {
                            break;
                        }
                        let mut tp = tau.clone();
                        for _ in 1..p {
                            tp = tp.compose(&qnext, &tau);
                        }
                        tau = tp;
                    }
                    Some(tau)
                }
            };
        }
        order = order / BigUint::from(orbit_len) * BigUint::from(p).pow(ker_dim);
        gens = next_gens;
        q = qnext;
    }
    Ok((
        AutGroup {
            group: q,
            order,
            gens,
        },
        sigma,
    ))
}

/// Brute-force enumeration of Aut(G) by generator images; the independent
/// oracle for small groups.
pub fn aut_brute(g: &Arc<PcGroup>, max_order_exp: usize) -> Result<Vec<Automorphism>> {
    if g.order_exp() > max_order_exp {
        return Err(Error::Budget {
            what: "brute-force automorphism search",
            limit: max_order_exp as u64,
            needed: g.order_exp() as u64,
        });
    }
    let d = g.rank();
    let elems: Vec<Element> = g.elements().collect();
    let mut out = Vec::new();
    let mut tuple = vec![0usize; d];
    loop {
        let min_imgs: Vec<Element> = tuple.iter().map(|&i| elems[i]).collect();
        let mat: Vec<Vec<u8>> = min_imgs
            .iter()
            .map(|x| (0..d).map(|j| x.exponent(j)).collect())
            .collect();
        if fp::matrix_rank(&mat, g.prime()) == d {
            if let Ok(images) = extend_images(g, g, &min_imgs) {
                if is_homomorphism(g, g, &images) {
                    out.push(Automorphism { images });
                }
            }
        }
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < elems.len() {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// Isomorphism-invariant tuple: order, class, rank, abelian invariants,
/// index-p abelianizations, element-order census (small groups), derived
/// subgroup invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint(Vec<u8>);

impl Fingerprint {
    pub fn digest(&self) -> u64 {
        crate::fnv1a(&self.0)
    }

    pub fn label(&self) -> String {
        format!("{:08x}", self.digest() as u32 ^ (self.digest() >> 32) as u32)
    }
}

const CENSUS_MAX_EXP: usize = 7;

pub fn fingerprint(g: &Arc<PcGroup>) -> Fingerprint {
    let mut b: Vec<u8> = Vec::new();
    let push32 = |b: &mut Vec<u8>, x: u32| b.extend_from_slice(&x.to_be_bytes());
    push32(&mut b, g.prime() as u32);
    push32(&mut b, g.order_exp() as u32);
    push32(&mut b, g.p_class() as u32);
    push32(&mut b, g.rank() as u32);
    let push_inv = |b: &mut Vec<u8>, inv: &crate::pcgroup::AbelianInvariants| {
        push32(b, inv.rank() as u32);
        for &e in inv.exponents() {
            push32(b, e);
        }
    };
    push_inv(&mut b, &g.abelian_invariants());
    if g.rank() >= 1 {
        let mut entries: Vec<Vec<u32>> = g
            .index_p_subgroups()
            .iter()
            .map(|h| {
                g.subgroup_abelian_invariants(h)
                    .expect("subgroup invariants")
                    .exponents()
                    .to_vec()
            })
            .collect();
        entries.sort();
        push32(&mut b, entries.len() as u32);
        for e in entries {
            push32(&mut b, e.len() as u32);
            for x in e {
                push32(&mut b, x);
            }
        }
    }
    if g.order_exp() <= CENSUS_MAX_EXP {
        let mut census: HashMap<u128, u64> = HashMap::new();
        for x in g.elements() {
            *census.entry(g.element_order(&x)).or_insert(0) += 1;
        }
        let mut census: Vec<(u128, u64)> = census.into_iter().collect();
        census.sort();
        push32(&mut b, census.len() as u32);
        for (o, c) in census {
            push32(&mut b, o as u32);
            push32(&mut b, c as u32);
        }
    }
    let derived = g.derived();
    push_inv(
        &mut b,
        &g.subgroup_abelian_invariants(&derived)
            .expect("derived invariants"),
    );
    Fingerprint(b)
}

/// Explicit isomorphism (images of G's minimal generators in H) or a
/// definitive negative.
pub fn is_isomorphic(
    g: &Arc<PcGroup>,
    h: &Arc<PcGroup>,
    budget: u64,
) -> Result<Option<Vec<Element>>> {
    if g.order_exp() != h.order_exp() || g.rank() != h.rank() || g.prime() != h.prime() {
        return Ok(None);
    }
    if fingerprint(g) != fingerprint(h) {
        return Ok(None);
    }
    let d = g.rank();
    if d == 0 {
        return Ok(Some(vec![]));
    }
    let horders: Vec<(Element, u128)> = h.elements().map(|x| (x, h.element_order(&x))).collect();
    let mut cands: Vec<Vec<Element>> = Vec::with_capacity(d);
    for i in 0..d {
        let o = g.element_order(&g.gen(i));
        let v: Vec<Element> = horders
            .iter()
            .filter(|(x, xo)| *xo == o && x.exponents()[..d].iter().any(|&e| e != 0))
            .map(|(x, _)| *x)
            .collect();
        cands.push(v);
    }
    let cost: u64 = cands
        .iter()
        .map(|v| v.len() as u64)
        .try_fold(1u64, |a, b| a.checked_mul(b))
        .unwrap_or(u64::MAX);
    if cost > budget {
        return Err(Error::Budget {
            what: "isomorphism search",
            limit: budget,
            needed: cost,
        });
    }
    let mut choice = vec![0usize; d];
    if cands.iter().any(|v| v.is_empty()) {
        return Ok(None);
    }
    'outer: loop {
        let min_imgs: Vec<Element> = (0..d).map(|i| cands[i][choice[i]]).collect();
        let mat: Vec<Vec<u8>> = min_imgs
            .iter()
            .map(|x| (0..d).map(|j| x.exponent(j)).collect())
            .collect();
        if fp::matrix_rank(&mat, h.prime()) == d {
            if let Ok(images) = extend_images(g, h, &min_imgs) {
                if is_homomorphism(g, h, &images) {
                    return Ok(Some(min_imgs));
                }
            }
        }
        let mut i = d;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < cands[i].len() {
                continue 'outer;
            }
            choice[i] = 0;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::free_quotient;
    use crate::pcgroup::{Definition, Subgroup, Word};

    fn heisenberg() -> Arc<PcGroup> {
        let mut comm = vec![Word::empty(); 3];
        comm[PcGroup::cidx(1, 0)] = Word::single(2, 1);
        Arc::new(
            PcGroup::new(
                3,
                3,
                2,
                vec![1, 1, 2],
                vec![Word::empty(); 3],
                comm,
                vec![None, None, Some(Definition::Comm(1, 0))],
            )
            .unwrap(),
        )
    }

    #[test]
    fn aut_orders_for_small_groups() {
        let ea = Arc::new(PcGroup::elementary_abelian(3, 2).unwrap());
        assert_eq!(aut_group(&ea).unwrap().order, BigUint::from(48u32));
        let c9 = Arc::new(PcGroup::cyclic(3, 2).unwrap());
        assert_eq!(aut_group(&c9).unwrap().order, BigUint::from(6u32));
        let h = heisenberg();
        assert_eq!(aut_group(&h).unwrap().order, BigUint::from(432u32));
    }

    #[test]
    fn w22_aut_order() {
        let w22 = free_quotient(3, 2, 2).unwrap();
        assert_eq!(aut_group(&w22).unwrap().order, BigUint::from(34992u32));
    }

    #[test]
    fn brute_force_matches_lifting() {
        for g in [
            Arc::new(PcGroup::elementary_abelian(3, 2).unwrap()),
            Arc::new(PcGroup::cyclic(3, 2).unwrap()),
            heisenberg(),
        ] {
            let brute = aut_brute(&g, 5).unwrap();
            let lifted = aut_group(&g).unwrap();
            assert_eq!(BigUint::from(brute.len()), lifted.order);
            for a in &lifted.gens {
                assert!(is_homomorphism(&g, &g, &a.images));
            }
        }
    }

    #[test]
    fn automorphism_inverse_roundtrip() {
        let h = heisenberg();
        let auts = aut_group(&h).unwrap();
        for a in auts.gens.iter().take(5) {
            let inv = a.inverse(&h);
            let comp = a.compose(&h, &inv);
            assert!(comp.is_identity(&h));
        }
    }

    #[test]
    fn fingerprint_invariance_and_separation() {
        let h1 = heisenberg();
        let (h2, _) = h1.quotient(&Subgroup::trivial()).unwrap();
        assert_eq!(fingerprint(&h1), fingerprint(&h2));
        // The two nonabelian order-27 groups differ: exponent 3 vs 9.
        let m27 = {
            let mut power = vec![Word::empty(); 3];
            power[0] = Word::single(2, 1);
            let mut comm = vec![Word::empty(); 3];
            comm[PcGroup::cidx(1, 0)] = Word::single(2, 1);
            Arc::new(
                PcGroup::new(
                    3,
                    3,
                    2,
                    vec![1, 1, 2],
                    power,
                    comm,
                    vec![None, None, Some(Definition::Pow(0))],
                )
                .unwrap(),
            )
        };
        assert_ne!(fingerprint(&h1), fingerprint(&m27));
        assert!(is_isomorphic(&h1, &m27, 1 << 24).unwrap().is_none());
        assert!(is_isomorphic(&h1, &h2, 1 << 24).unwrap().is_some());
    }
}
