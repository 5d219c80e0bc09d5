//! Generator-inverting involutions, their fixed points, and the relation
//! pools X_c inside free quotients.
//!
//! A sigma-automorphism is an order-2 automorphism acting as inversion on
//! the abelianization. Any involution inverting modulo the Frattini
//! subgroup automatically inverts the full abelianization (odd p), and
//! all such involutions are conjugate, so existence is decided by the
//! automorphism ladder. X_c is the set of twisted elements t^{-1} s(t)
//! over the Frattini subgroup of W_{g,c}; by the coincidence lemma it is
//! exactly the sigma-inverted subset of the Frattini subgroup, which is
//! what the implicit membership test uses.

use crate::autgroup::{aut_brute, aut_ladder, Automorphism};
use crate::cover::CoverData;
use crate::fp;
use crate::pcgroup::{extend_images, is_homomorphism, Element, PcGroup, Subgroup};
use crate::{Error, Result};
use std::sync::Arc;

/// A chosen involution together with its fixed-point data.
#[derive(Clone)]
pub struct SigmaData {
    pub sigma: Automorphism,
    /// z(G) = number of fixed points.
    pub z: u128,
    /// A = { x : sigma(x) = x }.
    pub fixed: Subgroup,
}

/// All fixed points of an automorphism, solved layer by layer: on each
/// elementary layer the condition is affine linear.
pub fn fixed_points(g: &PcGroup, auto: &Automorphism) -> Vec<Element> {
    if g.ngens() == 0 {
        return vec![Element::identity(0)];
    }
    assert!(g.is_weighted(), "fixed_points needs a standardized group");
    let p = g.prime();
    let class = g.weights().last().copied().unwrap_or(0);
    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); class as usize];
    for t in 0..g.ngens() {
        layers[g.weight(t) as usize - 1].push(t);
    }
    let mut partial: Vec<Element> = vec![g.identity()];
    for pos in &layers {
        // Action matrix on this layer minus identity.
        let mk = pos.len();
        let a_minus_i: Vec<Vec<u8>> = pos
            .iter()
            .enumerate()
            .map(|(r, &t)| {
                let img = &auto.images[t];
                pos.iter()
                    .enumerate()
                    .map(|(cidx, &j)| {
                        let v = img.exponent(j) as u16;
                        let sub = u16::from(r == cidx);
                        ((v + p as u16 - sub) % p as u16) as u8
                    })
                    .collect()
            })
            .collect();
        let hom_kernel = fp::kernel_basis(&transpose(&a_minus_i, mk), mk, p);
        let mut next: Vec<Element> = Vec::new();
        for x in &partial {
            // defect(x) = sigma(x) x^{-1} lies in this layer's subgroup.
            let defect = g.mul(&auto.apply(g, x), &g.inv(x));
            let dcoords: Vec<u8> = pos.iter().map(|&t| defect.exponent(t)).collect();
            debug_assert!(defect
                .factors()
                .all(|(t, _)| g.weight(t) >= g.weight(pos[0])));
            // Solve (A - I) v = -defect in row-vector convention:
            // v * (A - I) = -d.
            let neg_d: Vec<u8> = dcoords.iter().map(|&x| (p - x) % p).collect();
            let Some(v0) = solve_row_system(&a_minus_i, &neg_d, p) else {
                continue;
            };
            for hv in affine_points(&v0, &hom_kernel, p) {
                let mut y = g.identity();
                for (idx, &t) in pos.iter().enumerate() {
                    y.set_exponent(t, hv[idx]);
                }
                next.push(g.mul(x, &y));
            }
        }
        partial = next;
    }
    debug_assert!(partial.iter().all(|x| auto.apply(g, x) == *x));
    partial
}

fn transpose(m: &[Vec<u8>], ncols: usize) -> Vec<Vec<u8>> {
    let mut t = vec![vec![0u8; m.len()]; ncols];
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            t[j][i] = x;
        }
    }
    t
}

/// One solution of v * M = rhs over F_p, if any.
fn solve_row_system(m: &[Vec<u8>], rhs: &[u8], p: u8) -> Option<Vec<u8>> {
    // v * M = rhs  <=>  M^T v^T = rhs^T: augment and eliminate.
    let nvars = m.len();
    let neqs = rhs.len();
    let mut aug: Vec<Vec<u8>> = (0..neqs)
        .map(|e| {
            let mut row: Vec<u8> = (0..nvars).map(|v| m[v][e]).collect();
            row.push(rhs[e]);
            row
        })
        .collect();
    let pivots = fp::rref(&mut aug, p);
    let mut sol = vec![0u8; nvars];
    for (ri, &pc) in pivots.iter().enumerate() {
        if pc == nvars {
            return None; // inconsistent row 0 .. 0 | 1
        }
        sol[pc] = aug[ri][nvars];
    }
    Some(sol)
}

fn affine_points(v0: &[u8], kernel: &[Vec<u8>], p: u8) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let k = kernel.len();
    let total = (p as u64).pow(k as u32);
    for mut code in 0..total {
        let mut v = v0.to_vec();
        for basis in kernel {
            let c = (code % p as u64) as u16;
            code /= p as u64;
            if c != 0 {
                for (j, &b) in basis.iter().enumerate() {
                    v[j] = ((v[j] as u16 + c * b as u16) % p as u16) as u8;
                }
            }
        }
        out.push(v);
    }
    out
}

/// Package an involution with its fixed-point count and subgroup.
pub fn sigma_data(g: &Arc<PcGroup>, sigma: Automorphism) -> SigmaData {
    let fixed_elems = fixed_points(g, &sigma);
    let z = fixed_elems.len() as u128;
    let fixed = g.span(&fixed_elems);
    debug_assert_eq!(fixed.order(g), z, "fixed points must form a subgroup");
    SigmaData { sigma, z, fixed }
}

/// Search for a generator-inverting involution; a definitive answer.
pub fn find_sigma(g: &Arc<PcGroup>) -> Result<Option<SigmaData>> {
    let (_, sigma) = aut_ladder(g, true)?;
    Ok(sigma.map(|s| sigma_data(g, s)))
}

/// The canonical involution of a free quotient: every generator maps to
/// its inverse.
pub fn generator_inversion(w: &Arc<PcGroup>) -> Result<Automorphism> {
    let min_imgs: Vec<Element> = (0..w.rank())
        .map(|i| w.inv(&w.gen(i)))
        .collect();
    let images = extend_images(w, w, &min_imgs)?;
    if !is_homomorphism(w, w, &images) {
        return Err(Error::Structural(
            "generator inversion does not extend to this group".into(),
        ));
    }
    let auto = Automorphism { images };
    let sq = auto.compose(w, &auto);
    if !sq.is_identity(w) {
        return Err(Error::Structural(
            "generator inversion is not an involution here".into(),
        ));
    }
    Ok(auto)
}

/// z(G) for a valid involution.
pub fn z_value(g: &Arc<PcGroup>, s: &SigmaData) -> u128 {
    let _ = g;
    s.z
}

/// |Aut_sigma(G)| by independent brute force: enumerate all of Aut(G) by
/// generator images and count the centralizer of sigma.
pub fn aut_sigma_order_brute(
    g: &Arc<PcGroup>,
    s: &SigmaData,
    max_order_exp: usize,
) -> Result<u128> {
    let all = aut_brute(g, max_order_exp)?;
    let mut count = 0u128;
    for a in &all {
        let lhs = a.compose(g, &s.sigma);
        let rhs = s.sigma.compose(g, a);
        if lhs == rhs {
            count += 1;
        }
    }
    Ok(count)
}

/// The relation pool X_c of an ambient free quotient: explicit up to a
/// Frattini-size budget, an implicit membership predicate beyond.
pub enum XSet {
    Explicit {
        ambient: Arc<PcGroup>,
        sigma: Automorphism,
        elems: Vec<Element>,
    },
    Implicit {
        ambient: Arc<PcGroup>,
        sigma: Automorphism,
    },
}

impl XSet {
    pub fn ambient(&self) -> &Arc<PcGroup> {
        match self {
            XSet::Explicit { ambient, .. } | XSet::Implicit { ambient, .. } => ambient,
        }
    }

    pub fn sigma(&self) -> &Automorphism {
        match self {
            XSet::Explicit { sigma, .. } | XSet::Implicit { sigma, .. } => sigma,
        }
    }

    pub fn explicit_elements(&self) -> Option<&[Element]> {
        match self {
            XSet::Explicit { elems, .. } => Some(elems),
            XSet::Implicit { .. } => None,
        }
    }

    /// Membership: x in Phi(W) and sigma(x) = x^{-1} (the two defining
    /// descriptions of X coincide).
    pub fn contains(&self, x: &Element) -> bool {
        let w = self.ambient();
        if x.exponents()[..w.rank()].iter().any(|&e| e != 0) {
            return false;
        }
        self.sigma().apply(w, x) == w.inv(x)
    }
}

/// Build X_c = { t^{-1} sigma(t) : t in Phi(W) }.
pub fn x_set(w: &Arc<PcGroup>, sigma: &Automorphism, max_phi_exp: usize) -> XSet {
    let d = w.rank();
    let n = w.ngens();
    let phi_exp = n - d;
    if phi_exp > max_phi_exp {
        return XSet::Implicit {
            ambient: w.clone(),
            sigma: sigma.clone(),
        };
    }
    let p = w.prime();
    let total = (p as u128).pow(phi_exp as u32);
    let mut elems = Vec::new();
    for mut code in 0..total {
        let mut t = w.identity();
        for i in d..n {
            t.set_exponent(i, (code % p as u128) as u8);
            code /= p as u128;
        }
        let x = w.mul(&w.inv(&t), &sigma.apply(w, &t));
        elems.push(x);
    }
    elems.sort();
    elems.dedup();
    XSet::Explicit {
        ambient: w.clone(),
        sigma: sigma.clone(),
        elems,
    }
}

/// Lift an involution through the p-cover: extend any preimage assignment
/// and take the odd-power order-2 part. The lift restricts to the
/// original involution on the base.
pub fn sigma_lift(cov: &CoverData, sigma: &Automorphism) -> Result<Automorphism> {
    let base = &cov.base;
    let cover = &cov.cover;
    let p = base.prime();
    let d = base.rank();
    let mut min_imgs = Vec::with_capacity(d);
    for i in 0..d {
        let img = &sigma.images[i];
        let mut e = Element::identity(cover.ngens());
        for (k, f) in img.factors() {
            e.set_exponent(k, f);
        }
        min_imgs.push(e);
    }
    let images = extend_images(cover, cover, &min_imgs)?;
    if !is_homomorphism(cover, cover, &images) {
        return Err(Error::Structural("involution failed to lift to cover".into()));
    }
    let mut tau = Automorphism { images };
    loop {
        let sq = tau.compose(cover, &tau);
        if sq.is_identity(cover) {
            break;
        }
        let mut tp = tau.clone();
        for _ in 1..p {
            tp = tp.compose(cover, &tau);
        }
        tau = tp;
    }
    // Restriction check: images project onto the base involution.
    for i in 0..d {
        let mut proj = base.identity();
        for (k, f) in tau.images[i].factors() {
            if k < base.ngens() {
                proj.set_exponent(k, f);
            }
        }
        // Tail coordinates drop; the base part must match modulo nothing:
        // the projection of a normal form is its truncation.
        if proj != sigma.images[i] {
            return Err(Error::Structural(
                "cover involution does not restrict to the given one".into(),
            ));
        }
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{free_quotient, p_cover};
    use crate::pcgroup::{Definition, PcGroup, Word};

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
    fn inversion_on_free_quotients() {
        for c in 1..=3 {
            let w = free_quotient(3, 2, c).unwrap();
            let s = generator_inversion(&w).unwrap();
            assert!(s.compose(&w, &s).is_identity(&w));
        }
    }

    #[test]
    fn z_values_paper_examples() {
        // Elementary abelian: inversion fixes only the identity.
        let ea = Arc::new(PcGroup::elementary_abelian(3, 2).unwrap());
        let s = find_sigma(&ea).unwrap().unwrap();
        assert_eq!(s.z, 1);
        // Heisenberg group of order 27: z = 3.
        let h = heisenberg();
        let s = find_sigma(&h).unwrap().unwrap();
        assert_eq!(s.z, 3);
        // W_{2,2}: z = 3.
        let w22 = free_quotient(3, 2, 2).unwrap();
        let s22 = sigma_data(&w22, generator_inversion(&w22).unwrap());
        assert_eq!(s22.z, 3);
    }

    #[test]
    fn fixed_points_match_scan() {
        let h = heisenberg();
        let s = find_sigma(&h).unwrap().unwrap();
        let scan: Vec<Element> = h
            .elements()
            .filter(|x| s.sigma.apply(&h, x) == *x)
            .collect();
        assert_eq!(scan.len() as u128, s.z);
        for x in &scan {
            assert!(s.fixed.contains(&h, x));
        }
    }

    #[test]
    fn x2_is_elementary_abelian_of_order_nine() {
        let w22 = free_quotient(3, 2, 2).unwrap();
        let s = generator_inversion(&w22).unwrap();
        let x2 = x_set(&w22, &s, 8);
        let elems = x2.explicit_elements().unwrap();
        assert_eq!(elems.len(), 9);
        // Closed under multiplication and all elements have order <= 3.
        for a in elems {
            assert!(w22.pow(a, 3).is_identity());
            for b in elems {
                let prod = w22.mul(a, b);
                assert!(elems.binary_search(&prod).is_ok());
            }
        }
        // Both defining descriptions coincide on all of Phi.
        let phi = w22.frattini();
        for t in phi.elements(&w22) {
            let inverted = s.apply(&w22, &t) == w22.inv(&t);
            assert_eq!(inverted, elems.binary_search(&t).is_ok());
        }
    }

    #[test]
    fn x1_is_trivial() {
        let w21 = free_quotient(3, 2, 1).unwrap();
        let s = generator_inversion(&w21).unwrap();
        let x1 = x_set(&w21, &s, 8);
        assert_eq!(x1.explicit_elements().unwrap().len(), 1);
    }

    #[test]
    fn twist_map_fibers_are_uniform() {
        // t -> t^{-1} sigma(t) has all fibers of size |A meet Phi|.
        let w22 = free_quotient(3, 2, 2).unwrap();
        let s = sigma_data(&w22, generator_inversion(&w22).unwrap());
        let phi = w22.frattini();
        let mut counts: std::collections::HashMap<Element, usize> = Default::default();
        for t in phi.elements(&w22) {
            let x = w22.mul(&w22.inv(&t), &s.sigma.apply(&w22, &t));
            *counts.entry(x).or_insert(0) += 1;
        }
        let fiber: Vec<usize> = counts.values().copied().collect();
        let a_in_phi = s
            .fixed
            .basis()
            .iter()
            .filter(|b| phi.contains(&w22, b))
            .count();
        let expected = 3usize.pow(a_in_phi as u32);
        assert!(fiber.iter().all(|&f| f == expected));
        assert_eq!(counts.len(), 9);
    }

    #[test]
    fn sigma_lift_roundtrip() {
        let w22 = free_quotient(3, 2, 2).unwrap();
        let s22 = generator_inversion(&w22).unwrap();
        let cov = p_cover(&w22).unwrap();
        let lifted = sigma_lift(&cov, &s22).unwrap();
        assert!(lifted.compose(&cov.cover, &lifted).is_identity(&cov.cover));
        // The lift of inversion on the free quotient is inversion again.
        let w23_style = generator_inversion(&cov.cover).unwrap();
        assert_eq!(lifted.key(), w23_style.key());
    }

    #[test]
    fn aut_sigma_order_heisenberg() {
        let h = heisenberg();
        let s = find_sigma(&h).unwrap().unwrap();
        let c = aut_sigma_order_brute(&h, &s, 5).unwrap();
        // 432 / 3^2 = 48.
        assert_eq!(c, 48);
    }

    #[test]
    fn z_independent_of_choice() {
        // Conjugates of sigma have the same fixed-point count.
        let h = heisenberg();
        let s = find_sigma(&h).unwrap().unwrap();
        let auts = crate::autgroup::aut_group(&h).unwrap();
        for a in auts.gens.iter().take(6) {
            let conj = a
                .inverse(&h)
                .compose(&h, &s.sigma.compose(&h, a));
            let z2 = fixed_points(&h, &conj).len() as u128;
            assert_eq!(z2, s.z);
        }
    }

    #[test]
    fn trivial_group_z_is_one() {
        let t = Arc::new(PcGroup::new(3, 0, 0, vec![], vec![], vec![], vec![]).unwrap());
        let s = find_sigma(&t).unwrap().unwrap();
        assert_eq!(s.z, 1);
    }
}
