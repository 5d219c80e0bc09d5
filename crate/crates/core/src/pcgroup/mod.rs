//! Finite p-groups as consistent weighted power-commutator presentations.
//!
//! A group of order p^n is carried by n generators a_1..a_n with relations
//! a_i^p = w_ii and [a_j, a_i] = w_ji (j > i), every right-hand side a
//! normal word over generators of strictly larger index. Every element has
//! a unique normal form a_1^{e_1}...a_n^{e_n} with 0 <= e_i < p; products
//! are computed by collection from the left with memoized conjugates.

mod abelian;
mod format;
mod quotient;
mod subgroup;

pub use abelian::AbelianInvariants;
pub use quotient::{standardize, Homomorphism, Standardizer};
pub use subgroup::Subgroup;

use crate::{Error, Result};

/// Hard cap on the number of pc generators. Large enough for the free
/// quotients and tentative covers this crate targets (a cover carries one
/// tail per non-defining relation before elimination); exceeding it is a
/// budget error.
pub const MAX_GENS: usize = 64;

/// Exponent vector of a group element relative to the pc generators.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    len: u8,
    e: [u8; MAX_GENS],
}

impl Element {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_GENS);
        Element {
            len: n as u8,
            e: [0; MAX_GENS],
        }
    }

    /// The generator a_i as an element (0-based index).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut x = Self::identity(n);
        x.e[i] = 1;
        x
    }

    pub fn from_exponents(exps: &[u8]) -> Self {
        assert!(exps.len() <= MAX_GENS);
        let mut x = Self::identity(exps.len());
        x.e[..exps.len()].copy_from_slice(exps);
        x
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn exponent(&self, i: usize) -> u8 {
        self.e[i]
    }

    pub fn set_exponent(&mut self, i: usize, v: u8) {
        self.e[i] = v;
    }

    pub fn exponents(&self) -> &[u8] {
        &self.e[..self.len as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.exponents().iter().all(|&x| x == 0)
    }

    /// Index of the first nonzero exponent, if any.
    pub fn lead(&self) -> Option<usize> {
        self.exponents().iter().position(|&x| x != 0)
    }

    /// Nonzero factors (index, exponent) in increasing index order.
    pub fn factors(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.exponents()
            .iter()
            .enumerate()
            .filter(|(_, &f)| f != 0)
            .map(|(i, &f)| (i, f))
    }
}

impl std::fmt::Debug for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .factors()
            .map(|(i, x)| format!("g{}^{}", i + 1, x))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Normal word: factors (generator index, exponent in 1..p) with strictly
/// increasing indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word(pub Vec<(u16, u8)>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(i: usize, e: u8) -> Self {
        Word(vec![(i as u16, e)])
    }

    pub fn from_element(x: &Element) -> Self {
        Word(x.factors().map(|(i, f)| (i as u16, f)).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// How a non-minimal generator arises from earlier ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definition {
    /// a_t is defined by the power relation of a_i.
    Pow(usize),
    /// a_t is defined by the commutator relation [a_j, a_i], j > i.
    Comm(usize, usize),
}

/// A finite p-group given by a consistent pc presentation.
#[derive(Clone)]
pub struct PcGroup {
    p: u8,
    n: usize,
    d: usize,
    /// Per-generator p-class weight; empty for raw (unweighted) groups.
    weights: Vec<u32>,
    /// power[i] is the word for a_i^p.
    power: Vec<Word>,
    /// comm[cidx(j,i)] is the word for [a_j, a_i], j > i.
    comm: Vec<Word>,
    defs: Vec<Option<Definition>>,
    /// Memoized conjugates a_k^(a_j^e) for k > j, 1 <= e < p.
    conj: Vec<Element>,
}

impl std::fmt::Debug for PcGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PcGroup(p={}, n={}, d={})", self.p, self.n, self.d)
    }
}

fn push_word_rev(stack: &mut Vec<(u16, u8)>, w: &Word) {
    for &(i, e) in w.0.iter().rev() {
        stack.push((i, e));
    }
}

fn push_elt_rev(stack: &mut Vec<(u16, u8)>, x: &Element) {
    for k in (0..x.len()).rev() {
        let f = x.exponent(k);
        if f != 0 {
            stack.push((k as u16, f));
        }
    }
}

/// Collection from the left over explicit relation/conjugate tables.
/// Free function so the conjugate table can be filled incrementally.
fn collect_with(
    p: u8,
    n: usize,
    power: &[Word],
    conj: &[Element],
    c: &mut Element,
    stack: &mut Vec<(u16, u8)>,
) {
    let tidx = |k: usize, j: usize, e: u8| -> usize {
        (k * (k - 1) / 2 + j) * (p as usize - 1) + (e as usize - 1)
    };
    while let Some((jj, e)) = stack.pop() {
        let j = jj as usize;
        debug_assert!(e >= 1 && (e as u8) < p && j < n);
        let mut top = None;
        for k in (j + 1..n).rev() {
            if c.e[k] != 0 {
                top = Some(k);
                break;
            }
        }
        match top {
            None => {
                let s = c.e[j] + e;
                if s >= p {
                    c.e[j] = s - p;
                    push_word_rev(stack, &power[j]);
                } else {
                    c.e[j] = s;
                }
            }
            Some(top) => {
                // Move a_j^e left past the suffix, conjugating the suffix.
                let mut suffix: Vec<(usize, u8)> = Vec::with_capacity(4);
                for k in j + 1..=top {
                    if c.e[k] != 0 {
                        suffix.push((k, c.e[k]));
                        c.e[k] = 0;
                    }
                }
                let s = c.e[j] + e;
                let carry = s >= p;
                c.e[j] = if carry { s - p } else { s };
                for &(k, f) in suffix.iter().rev() {
                    let ce = &conj[tidx(k, j, e)];
                    for _ in 0..f {
                        push_elt_rev(stack, ce);
                    }
                }
                if carry {
                    push_word_rev(stack, &power[j]);
                }
            }
        }
    }
}

impl PcGroup {
    #[inline]
    pub(crate) fn cidx(j: usize, i: usize) -> usize {
        debug_assert!(j > i);
        j * (j - 1) / 2 + i
    }

    fn tidx(&self, k: usize, j: usize, e: u8) -> usize {
        (k * (k - 1) / 2 + j) * (self.p as usize - 1) + (e as usize - 1)
    }

    /// Builds a group from relation data and runs the mandatory
    /// consistency check. `weights`/`defs` may be empty for raw groups.
    pub fn new(
        p: u8,
        n: usize,
        d: usize,
        weights: Vec<u32>,
        power: Vec<Word>,
        comm: Vec<Word>,
        defs: Vec<Option<Definition>>,
    ) -> Result<Self> {
        let g = Self::new_unchecked(p, n, d, weights, power, comm, defs)?;
        let defects = g.consistency_defects();
        if !defects.is_empty() {
            return Err(Error::Inconsistent(format!(
                "{} failed collection checks, e.g. {:?} != {:?}",
                defects.len(),
                defects[0].0,
                defects[0].1
            )));
        }
        Ok(g)
    }

    /// Structural validation and conjugate-table construction without the
    /// consistency check. Used for tentative covers, whose defects are
    /// harvested rather than rejected.
    pub(crate) fn new_unchecked(
        p: u8,
        n: usize,
        d: usize,
        weights: Vec<u32>,
        power: Vec<Word>,
        comm: Vec<Word>,
        defs: Vec<Option<Definition>>,
    ) -> Result<Self> {
        if p < 3 || !is_prime(p as u64) {
            return Err(Error::Structural(format!("p = {p} is not an odd prime")));
        }
        if n > MAX_GENS {
            return Err(Error::Budget {
                what: "pc generators",
                limit: MAX_GENS as u64,
                needed: n as u64,
            });
        }
        if d > n || power.len() != n || comm.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::Structural("relation table shape mismatch".into()));
        }
        if !weights.is_empty() {
            if weights.len() != n {
                return Err(Error::Structural("weights length mismatch".into()));
            }
            if weights.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Structural("weights must be nondecreasing".into()));
            }
            if weights.iter().filter(|&&w| w == 1).count() != d {
                return Err(Error::Structural(
                    "weight-1 generators must be exactly the first d".into(),
                ));
            }
        }
        let check_word = |w: &Word, min: usize| -> Result<()> {
            let mut last = None;
            for &(i, e) in &w.0 {
                let i = i as usize;
                if i <= min || i >= n || e == 0 || e >= p {
                    return Err(Error::Structural(format!(
                        "bad factor g{}^{} in relation word",
                        i + 1,
                        e
                    )));
                }
                if let Some(l) = last {
                    if i <= l {
                        return Err(Error::Structural("word indices not increasing".into()));
                    }
                }
                last = Some(i);
            }
            Ok(())
        };
        for (i, w) in power.iter().enumerate() {
            check_word(w, i)?;
        }
        for j in 1..n {
            for i in 0..j {
                check_word(&comm[Self::cidx(j, i)], j)?;
            }
        }
        if !defs.is_empty() {
            if defs.len() != n {
                return Err(Error::Structural("defs length mismatch".into()));
            }
            for t in 0..n {
                if let Some(def) = defs[t] {
                    let w = match def {
                        Definition::Pow(i) => {
                            if i >= t {
                                return Err(Error::Structural("definition index order".into()));
                            }
                            &power[i]
                        }
                        Definition::Comm(j, i) => {
                            if !(i < j && j < t) {
                                return Err(Error::Structural("definition index order".into()));
                            }
                            &comm[Self::cidx(j, i)]
                        }
                    };
                    match w.0.last() {
                        Some(&(last, 1)) if last as usize == t => {}
                        _ => {
                            return Err(Error::Structural(format!(
                                "defining relation of g{} must end in g{}^1",
                                t + 1,
                                t + 1
                            )))
                        }
                    }
                    if w.0[..w.0.len() - 1].iter().any(|&(i, _)| i as usize >= t) {
                        return Err(Error::Structural(
                            "definition residual must involve earlier generators only".into(),
                        ));
                    }
                }
            }
        }
        let mut g = PcGroup {
            p,
            n,
            d,
            weights,
            power,
            comm,
            defs,
            conj: Vec::new(),
        };
        g.init_conj();
        Ok(g)
    }

    /// Elementary abelian group (Z/p)^g: the class-1 free quotient.
    pub fn elementary_abelian(p: u8, g: usize) -> Result<Self> {
        Self::new(
            p,
            g,
            g,
            vec![1; g],
            vec![Word::empty(); g],
            vec![Word::empty(); g * (g - 1) / 2],
            vec![None; g],
        )
    }

    /// Cyclic group Z/p^c with the standard weighted chain presentation.
    pub fn cyclic(p: u8, c: usize) -> Result<Self> {
        assert!(c >= 1);
        let n = c;
        let mut power = Vec::with_capacity(n);
        for i in 0..n {
            if i + 1 < n {
                power.push(Word::single(i + 1, 1));
            } else {
                power.push(Word::empty());
            }
        }
        let comm = vec![Word::empty(); n * (n - 1) / 2];
        let mut defs: Vec<Option<Definition>> = vec![None];
        for i in 1..n {
            defs.push(Some(Definition::Pow(i - 1)));
        }
        Self::new(
            p,
            n,
            1,
            (1..=n as u32).collect(),
            power,
            comm,
            defs,
        )
    }

    fn init_conj(&mut self) {
        let p = self.p;
        let n = self.n;
        let size = n * (n.saturating_sub(1)) / 2 * (p as usize - 1);
        let mut table = vec![Element::identity(n); size];
        let tidx = |k: usize, j: usize, e: u8| -> usize {
            (k * (k - 1) / 2 + j) * (p as usize - 1) + (e as usize - 1)
        };
        let mut stack: Vec<(u16, u8)> = Vec::with_capacity(64);
        for k in (1..n).rev() {
            for j in 0..k {
                // e = 1: a_k^(a_j) = a_k * w_kj.
                let mut x = Element::unit(n, k);
                stack.clear();
                push_word_rev(&mut stack, &self.comm[Self::cidx(k, j)]);
                collect_with(p, n, &self.power, &table, &mut x, &mut stack);
                table[tidx(k, j, 1)] = x;
                for e in 2..p {
                    // Conjugate the previous entry by a_j once more.
                    let prev = table[tidx(k, j, e - 1)];
                    let mut acc = Element::identity(n);
                    for (m, f) in prev.factors() {
                        let cm = table[tidx(m, j, 1)];
                        for _ in 0..f {
                            stack.clear();
                            push_elt_rev(&mut stack, &cm);
                            collect_with(p, n, &self.power, &table, &mut acc, &mut stack);
                        }
                    }
                    table[tidx(k, j, e)] = acc;
                }
            }
        }
        self.conj = table;
    }

    pub fn prime(&self) -> u8 {
        self.p
    }

    pub fn ngens(&self) -> usize {
        self.n
    }

    /// Minimal generator count d(G) (Burnside rank).
    pub fn rank(&self) -> usize {
        self.d
    }

    /// Exponent of the group order: |G| = p^order_exp.
    pub fn order_exp(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.n as u32)
    }

    pub fn is_weighted(&self) -> bool {
        !self.weights.is_empty()
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn definition(&self, t: usize) -> Option<Definition> {
        if self.defs.is_empty() {
            None
        } else {
            self.defs[t]
        }
    }

    pub(crate) fn power_word(&self, i: usize) -> &Word {
        &self.power[i]
    }

    pub(crate) fn comm_word(&self, j: usize, i: usize) -> &Word {
        &self.comm[Self::cidx(j, i)]
    }

    pub fn identity(&self) -> Element {
        Element::identity(self.n)
    }

    pub fn gen(&self, i: usize) -> Element {
        Element::unit(self.n, i)
    }

    /// Product of two normal forms. Checked public entry point.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        if a.len() != self.n || b.len() != self.n {
            return Err(Error::Structural(format!(
                "exponent sequence length mismatch: group has {} generators, got {} and {}",
                self.n,
                a.len(),
                b.len()
            )));
        }
        Ok(self.mul(a, b))
    }

    #[inline]
    pub(crate) fn mul(&self, a: &Element, b: &Element) -> Element {
        debug_assert_eq!(a.len(), self.n);
        debug_assert_eq!(b.len(), self.n);
        let mut c = *a;
        let mut stack: Vec<(u16, u8)> = Vec::with_capacity(32);
        push_elt_rev(&mut stack, b);
        collect_with(self.p, self.n, &self.power, &self.conj, &mut c, &mut stack);
        c
    }

    /// Collect an arbitrary (not necessarily normal) word into normal form.
    pub(crate) fn collect_word(&self, w: &Word) -> Element {
        let mut c = Element::identity(self.n);
        let mut stack: Vec<(u16, u8)> = Vec::with_capacity(32);
        push_word_rev(&mut stack, w);
        collect_with(self.p, self.n, &self.power, &self.conj, &mut c, &mut stack);
        c
    }

    pub fn inv(&self, x: &Element) -> Element {
        let mut y = Element::identity(self.n);
        let mut w = *x;
        for i in 0..self.n {
            let f = w.e[i];
            if f != 0 {
                let g = self.p - f;
                let mut step = Element::identity(self.n);
                step.e[i] = g;
                y.e[i] = g;
                w = self.mul(&w, &step);
            }
        }
        debug_assert!(w.is_identity());
        y
    }

    pub fn pow(&self, x: &Element, e: u32) -> Element {
        let mut acc = Element::identity(self.n);
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// [a, b] = a^{-1} b^{-1} a b.
    pub fn commutator(&self, a: &Element, b: &Element) -> Element {
        let ia = self.inv(a);
        let ib = self.inv(b);
        self.mul(&self.mul(&self.mul(&ia, &ib), a), b)
    }

    pub fn conjugate(&self, x: &Element, g: &Element) -> Element {
        let ig = self.inv(g);
        self.mul(&self.mul(&ig, x), g)
    }

    /// Order of an element (a power of p).
    pub fn element_order(&self, x: &Element) -> u128 {
        let mut y = *x;
        let mut ord: u128 = 1;
        while !y.is_identity() {
            y = self.pow(&y, self.p as u32);
            ord *= self.p as u128;
        }
        ord
    }

    /// All elements, in lexicographic exponent order. Only sensible for
    /// small groups; the caller bounds the order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        let n = self.n;
        let p = self.p;
        let total = (p as u128).pow(n as u32);
        (0..total).map(move |mut idx| {
            let mut x = Element::identity(n);
            for i in (0..n).rev() {
                x.e[i] = (idx % p as u128) as u8;
                idx /= p as u128;
            }
            x
        })
    }

    /// Collection-based consistency defects: pairs of distinct normal forms
    /// that the standard associativity/power checks produce. Empty iff the
    /// presentation is consistent.
    pub(crate) fn consistency_defects(&self) -> Vec<(Element, Element)> {
        self.consistency_defects_bounded(None)
    }

    /// Consistency checks restricted to the standard weighted test set:
    /// with a bound L, triple checks run only when the generator weights
    /// sum to at most L, and power checks when w(j)+w(i)+1 <= L. The
    /// single-generator checks always run.
    pub(crate) fn consistency_defects_bounded(&self, bound: Option<u32>) -> Vec<(Element, Element)> {
        let mut out = Vec::new();
        let n = self.n;
        let p = self.p as u32;
        let unit = |i| Element::unit(n, i);
        let w = |i: usize| -> u32 {
            if self.weights.is_empty() {
                1
            } else {
                self.weights[i]
            }
        };
        let skip3 = |i: usize, j: usize, k: usize| match bound {
            Some(l) if !self.weights.is_empty() => w(i) + w(j) + w(k) > l,
            _ => false,
        };
        let skip2 = |i: usize, j: usize| match bound {
            Some(l) if !self.weights.is_empty() => w(i) + w(j) + 1 > l,
            _ => false,
        };
        for k in 2..n {
            for j in 1..k {
                for i in 0..j {
                    if skip3(i, j, k) {
                        continue;
                    }
                    let l = self.mul(&self.mul(&unit(k), &unit(j)), &unit(i));
                    let r = self.mul(&unit(k), &self.mul(&unit(j), &unit(i)));
                    if l != r {
                        out.push((l, r));
                    }
                }
            }
        }
        for j in 1..n {
            for i in 0..j {
                if skip2(i, j) {
                    continue;
                }
                let ajp = self.pow(&unit(j), p);
                let l = self.mul(&ajp, &unit(i));
                let r = self.mul(
                    &self.pow(&unit(j), p - 1),
                    &self.mul(&unit(j), &unit(i)),
                );
                if l != r {
                    out.push((l, r));
                }
                let aip = self.pow(&unit(i), p);
                let l2 = self.mul(&unit(j), &aip);
                let r2 = self.mul(&self.mul(&unit(j), &unit(i)), &self.pow(&unit(i), p - 1));
                if l2 != r2 {
                    out.push((l2, r2));
                }
            }
        }
        for i in 0..n {
            let aip = self.pow(&unit(i), p);
            let l = self.mul(&unit(i), &aip);
            let r = self.mul(&aip, &unit(i));
            if l != r {
                out.push((l, r));
            }
        }
        out
    }

    /// Evaluate a word at the given generator images.
    pub fn eval_word(&self, imgs: &[Element], w: &Word) -> Element {
        let mut acc = self.identity();
        for &(i, e) in &w.0 {
            let img = &imgs[i as usize];
            for _ in 0..e {
                acc = self.mul(&acc, img);
            }
        }
        acc
    }

    /// Apply generator images to an element: a_1^{e_1}..a_n^{e_n} maps to
    /// imgs_1^{e_1}..imgs_n^{e_n}.
    pub fn apply_images(&self, imgs: &[Element], x: &Element) -> Element {
        let mut acc = self.identity();
        for (i, f) in x.factors() {
            for _ in 0..f {
                acc = self.mul(&acc, &imgs[i]);
            }
        }
        acc
    }
}

/// Extend images of the d minimal generators of `src` to images of all
/// generators, following definitions. Images live in `dst`.
pub fn extend_images(src: &PcGroup, dst: &PcGroup, min_imgs: &[Element]) -> Result<Vec<Element>> {
    if min_imgs.len() != src.rank() {
        return Err(Error::RankMismatch {
            expected: src.rank(),
            got: min_imgs.len(),
        });
    }
    let mut imgs = vec![dst.identity(); src.ngens()];
    imgs[..src.rank()].copy_from_slice(min_imgs);
    for t in src.rank()..src.ngens() {
        let def = src.definition(t).ok_or_else(|| {
            Error::Structural(format!("generator g{} has no definition", t + 1))
        })?;
        let (relword, target) = match def {
            Definition::Pow(i) => (src.power_word(i).clone(), dst.pow(&imgs[i], src.p as u32)),
            Definition::Comm(j, i) => (
                src.comm_word(j, i).clone(),
                dst.commutator(&imgs[j], &imgs[i]),
            ),
        };
        // Relation reads lhs = w * a_t, so a_t = w^{-1} * lhs.
        let residual = Word(relword.0[..relword.0.len() - 1].to_vec());
        let img_w = dst.eval_word(&imgs, &residual);
        imgs[t] = dst.mul(&dst.inv(&img_w), &target);
    }
    Ok(imgs)
}

/// Check whether full generator images define a homomorphism src -> dst,
/// i.e. respect every power and commutator relation.
pub fn is_homomorphism(src: &PcGroup, dst: &PcGroup, imgs: &[Element]) -> bool {
    debug_assert_eq!(imgs.len(), src.ngens());
    let p = src.p as u32;
    for i in 0..src.ngens() {
        let lhs = dst.pow(&imgs[i], p);
        let rhs = dst.eval_word(imgs, src.power_word(i));
        if lhs != rhs {
            return false;
        }
    }
    for j in 1..src.ngens() {
        for i in 0..j {
            let lhs = dst.commutator(&imgs[j], &imgs[i]);
            let rhs = dst.eval_word(imgs, src.comm_word(j, i));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= x {
        if x % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The exponent-3 extraspecial group of order 27 (Heisenberg over F_3):
    /// a_1, a_2 minimal, a_3 = [a_2, a_1] central, all cubes trivial.
    pub(crate) fn heisenberg27() -> PcGroup {
        let n = 3;
        let mut comm = vec![Word::empty(); 3];
        comm[PcGroup::cidx(1, 0)] = Word::single(2, 1);
        PcGroup::new(
            3,
            n,
            2,
            vec![1, 1, 2],
            vec![Word::empty(); 3],
            comm,
            vec![None, None, Some(Definition::Comm(1, 0))],
        )
        .unwrap()
    }

    /// Independent oracle: 3x3 upper unitriangular matrices over F_3.
    #[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
    struct Uni {
        a: u8, // (0,1)
        b: u8, // (1,2)
        c: u8, // (0,2)
    }

    fn uni_mul(x: Uni, y: Uni) -> Uni {
        Uni {
            a: (x.a + y.a) % 3,
            b: (x.b + y.b) % 3,
            c: (x.c + y.c + x.a * y.b) % 3,
        }
    }

    /// Normal form a_1^i a_2^j a_3^k as a matrix, with a_1 = I+E12,
    /// a_2 = I+E23, a_3 = [a_2,a_1].
    fn to_uni(g: &PcGroup, x: &Element) -> Uni {
        let x1 = Uni { a: 1, b: 0, c: 0 };
        let x2 = Uni { a: 0, b: 1, c: 0 };
        // [a_2, a_1] in the matrix group:
        let inv = |m: Uni| {
            // order 3 everywhere, so m^-1 = m^2
            uni_mul(m, m)
        };
        let x3 = uni_mul(uni_mul(inv(x2), inv(x1)), uni_mul(x2, x1));
        let mut acc = Uni { a: 0, b: 0, c: 0 };
        let gens = [x1, x2, x3];
        for (i, f) in x.factors() {
            for _ in 0..f {
                acc = uni_mul(acc, gens[i]);
            }
        }
        let _ = g;
        acc
    }

    #[test]
    fn heisenberg_matches_matrix_model() {
        let g = heisenberg27();
        // Full multiplication table against the independent matrix model.
        let elts: Vec<Element> = g.elements().collect();
        assert_eq!(elts.len(), 27);
        for a in &elts {
            for b in &elts {
                let prod = g.mul(a, b);
                assert_eq!(to_uni(&g, &prod), uni_mul(to_uni(&g, a), to_uni(&g, b)));
            }
        }
    }

    #[test]
    fn heisenberg_commutator_nontrivial_of_order_three() {
        let g = heisenberg27();
        let x = g.gen(0);
        let y = g.gen(1);
        let c = g.commutator(&x, &y);
        assert!(!c.is_identity());
        assert!(g.pow(&c, 3).is_identity());
    }

    #[test]
    fn identity_and_inverse() {
        let g = heisenberg27();
        let e = g.identity();
        for x in g.elements() {
            assert_eq!(g.mul(&e, &x), x);
            assert_eq!(g.mul(&x, &e), x);
            assert!(g.mul(&x, &g.inv(&x)).is_identity());
        }
    }

    #[test]
    fn cyclic_group_orders() {
        let g = PcGroup::cyclic(3, 2).unwrap();
        assert_eq!(g.order(), 9);
        let x = g.gen(0);
        assert_eq!(g.element_order(&x), 9);
        assert_eq!(g.element_order(&g.pow(&x, 3)), 3);
    }

    #[test]
    fn inconsistent_presentation_rejected() {
        // a_2 = a_1^3 must commute with a_1 in any group, so declaring
        // [a_2, a_1] = a_3 nontrivial cannot be consistent.
        let n = 3;
        let mut power = vec![Word::empty(); 3];
        power[0] = Word::single(1, 1);
        power[1] = Word::single(2, 1);
        let mut comm = vec![Word::empty(); 3];
        comm[PcGroup::cidx(1, 0)] = Word::single(2, 1);
        let r = PcGroup::new(3, n, 1, vec![], power, comm, vec![]);
        assert!(matches!(r, Err(Error::Inconsistent(_))));
    }

    #[test]
    fn multiply_length_mismatch_is_structural_error() {
        let g = heisenberg27();
        let bad = Element::identity(2);
        assert!(matches!(
            g.multiply(&g.identity(), &bad),
            Err(Error::Structural(_))
        ));
    }
}
