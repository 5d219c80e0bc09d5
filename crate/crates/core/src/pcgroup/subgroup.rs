//! Subgroups as echelonized induced generating sequences.
//!
//! A subgroup is stored by a basis of normal forms with strictly increasing
//! leading indices, leading exponent 1, and zero entries at every other
//! basis lead (fully reduced echelon). The basis is canonical per subgroup,
//! membership is a single sift pass, and |H| = p^(basis length).

use super::{Element, PcGroup};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    basis: Vec<Element>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup { basis: Vec::new() }
    }

    pub fn basis(&self) -> &[Element] {
        &self.basis
    }

    pub fn order_exp(&self) -> usize {
        self.basis.len()
    }

    pub fn order(&self, g: &PcGroup) -> u128 {
        (g.prime() as u128).pow(self.basis.len() as u32)
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn leads(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.lead().unwrap()).collect()
    }

    /// Canonical byte key (unique per subgroup thanks to full reduction).
    pub fn key(&self, g: &PcGroup) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.basis.len() * g.ngens());
        for b in &self.basis {
            out.extend_from_slice(b.exponents());
        }
        out
    }

    /// Canonical coset representative of x modulo the subgroup: one left
    /// reduction per basis element, in increasing lead order. The result
    /// has zero entries at every basis lead and lies in (subgroup)*x.
    pub fn sift(&self, g: &PcGroup, x: &Element) -> Element {
        let mut r = *x;
        for b in &self.basis {
            let l = b.lead().unwrap();
            let c = r.exponent(l);
            if c != 0 {
                let adj = g.pow(b, (g.prime() - c) as u32);
                r = g.mul(&adj, &r);
            }
        }
        r
    }

    pub fn contains(&self, g: &PcGroup, x: &Element) -> bool {
        self.sift(g, x).is_identity()
    }

    /// Insert a sifted remainder; maintains the fully reduced invariant.
    fn insert_remainder(&mut self, g: &PcGroup, r: &Element) {
        let l = r.lead().expect("remainder must be nontrivial");
        let e = r.exponent(l);
        let einv = mod_inv(e as u32, g.prime() as u32);
        let r = g.pow(r, einv);
        debug_assert_eq!(r.exponent(l), 1);
        let pos = self
            .basis
            .iter()
            .position(|b| b.lead().unwrap() > l)
            .unwrap_or(self.basis.len());
        self.basis.insert(pos, r);
        self.fully_reduce(g);
    }

    /// Zero out every basis-lead entry of every basis element (other than
    /// its own lead) by right multiplications in increasing lead order.
    fn fully_reduce(&mut self, g: &PcGroup) {
        let leads = self.leads();
        for i in 0..self.basis.len() {
            let mut r = self.basis[i];
            for j in 0..self.basis.len() {
                if j == i || leads[j] <= leads[i] {
                    continue;
                }
                let c = r.exponent(leads[j]);
                if c != 0 {
                    let adj = g.pow(&self.basis[j], (g.prime() - c) as u32);
                    r = g.mul(&r, &adj);
                }
            }
            self.basis[i] = r;
        }
    }

    /// Closure of a generating set. With `normal` set, also closes under
    /// conjugation by all pc generators of the ambient group.
    pub fn closure(g: &PcGroup, gens: &[Element], normal: bool) -> Subgroup {
        let mut sub = Subgroup::trivial();
        let mut work: Vec<Element> = gens.to_vec();
        while let Some(x) = work.pop() {
            let r = sub.sift(g, &x);
            if r.is_identity() {
                continue;
            }
            work.push(g.pow(&r, g.prime() as u32));
            for b in &sub.basis {
                work.push(g.commutator(&r, b));
                work.push(g.commutator(b, &r));
            }
            if normal {
                for t in 0..g.ngens() {
                    work.push(g.conjugate(&r, &g.gen(t)));
                }
            }
            sub.insert_remainder(g, &r);
        }
        sub
    }

    /// Enumerate all elements (p^order_exp of them), generated as products
    /// in increasing basis order.
    pub fn elements(&self, g: &PcGroup) -> Vec<Element> {
        let p = g.prime() as u128;
        let m = self.basis.len();
        let total = p.pow(m as u32);
        let mut out = Vec::with_capacity(total as usize);
        for mut idx in 0..total {
            let mut acc = g.identity();
            for b in self.basis.iter().rev() {
                let e = (idx % p) as u32;
                idx /= p;
                if e != 0 {
                    acc = g.mul(&g.pow(b, e), &acc);
                }
            }
            out.push(acc);
        }
        out
    }

    /// Join of two subgroups (subgroup generated by both).
    pub fn join(&self, g: &PcGroup, other: &Subgroup) -> Subgroup {
        let mut gens: Vec<Element> = self.basis.clone();
        gens.extend_from_slice(&other.basis);
        Subgroup::closure(g, &gens, false)
    }

    pub fn subset_of(&self, g: &PcGroup, other: &Subgroup) -> bool {
        self.basis.iter().all(|b| other.contains(g, b))
    }

    pub fn is_normal(&self, g: &PcGroup) -> bool {
        for b in &self.basis {
            for t in 0..g.ngens() {
                let gt = g.gen(t);
                if !self.contains(g, &g.conjugate(b, &gt)) {
                    return false;
                }
            }
        }
        true
    }
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = (a % p) as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

impl PcGroup {
    /// Smallest normal subgroup containing the given elements.
    pub fn normal_closure(&self, gens: &[Element]) -> Result<Subgroup> {
        for x in gens {
            if x.len() != self.ngens() {
                return Err(Error::Structural(
                    "element length mismatch in normal_closure".into(),
                ));
            }
        }
        Ok(Subgroup::closure(self, gens, true))
    }

    /// Subgroup generated by the given elements (no normalization).
    pub fn span(&self, gens: &[Element]) -> Subgroup {
        Subgroup::closure(self, gens, false)
    }

    pub fn full_subgroup(&self) -> Subgroup {
        let gens: Vec<Element> = (0..self.ngens()).map(|i| self.gen(i)).collect();
        Subgroup::closure(self, &gens, false)
    }

    /// Frattini subgroup P_1(G) = G^p [G,G].
    pub fn frattini(&self) -> Subgroup {
        let mut gens = Vec::new();
        for i in 0..self.ngens() {
            gens.push(self.pow(&self.gen(i), self.prime() as u32));
            for j in 0..i {
                gens.push(self.commutator(&self.gen(i), &self.gen(j)));
            }
        }
        Subgroup::closure(self, &gens, true)
    }

    /// Lower p-central series P_1 >= P_2 >= ... >= P_c = 1 (P_0 = G is
    /// omitted). The p-class is the returned length.
    pub fn lower_p_central(&self) -> Vec<Subgroup> {
        if self.ngens() == 0 {
            return vec![];
        }
        let mut series = Vec::new();
        let mut current = self.frattini();
        loop {
            let done = current.is_trivial();
            series.push(current.clone());
            if done {
                break;
            }
            // P_{k+1} = < P_k^p, [G, P_k] > as a normal subgroup.
            let mut gens = Vec::new();
            for b in current.basis() {
                gens.push(self.pow(b, self.prime() as u32));
                for t in 0..self.ngens() {
                    gens.push(self.commutator(b, &self.gen(t)));
                }
            }
            current = Subgroup::closure(self, &gens, true);
        }
        series
    }

    /// p-class: length of the lower p-central series.
    pub fn p_class(&self) -> usize {
        self.lower_p_central().len()
    }

    /// Derived subgroup [G, G].
    pub fn derived(&self) -> Subgroup {
        let mut gens = Vec::new();
        for i in 0..self.ngens() {
            for j in 0..i {
                gens.push(self.commutator(&self.gen(i), &self.gen(j)));
            }
        }
        Subgroup::closure(self, &gens, true)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::heisenberg27;
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn closure_matches_set_bfs_oracle() {
        let g = heisenberg27();
        let gens = vec![g.gen(0)];
        let sub = g.normal_closure(&gens).unwrap();
        // Independent BFS oracle over raw element sets.
        let mut set: HashSet<Element> = HashSet::new();
        let mut work = vec![g.identity(), g.gen(0)];
        while let Some(x) = work.pop() {
            if !set.insert(x) {
                continue;
            }
            for y in set.clone() {
                work.push(g.mul(&x, &y));
            }
            for t in 0..g.ngens() {
                work.push(g.conjugate(&x, &g.gen(t)));
            }
            work.push(g.inv(&x));
        }
        assert_eq!(set.len() as u128, sub.order(&g));
        for x in &set {
            assert!(sub.contains(&g, x));
        }
    }

    #[test]
    fn empty_closure_is_trivial() {
        let g = heisenberg27();
        let sub = g.normal_closure(&[]).unwrap();
        assert!(sub.is_trivial());
        assert_eq!(sub.order(&g), 1);
    }

    #[test]
    fn closure_of_generators_is_whole_group() {
        let g = heisenberg27();
        let sub = g.normal_closure(&[g.gen(0), g.gen(1)]).unwrap();
        assert_eq!(sub.order(&g), 27);
    }

    #[test]
    fn heisenberg_series() {
        let g = heisenberg27();
        let series = g.lower_p_central();
        assert_eq!(series.len(), 2); // p-class 2
        assert_eq!(series[0].order(&g), 3); // Frattini = center of order 3
        assert!(series[1].is_trivial());
    }

    #[test]
    fn sift_gives_canonical_coset_representatives() {
        let g = heisenberg27();
        let phi = g.frattini();
        let mut reps = HashSet::new();
        for x in g.elements() {
            reps.insert(phi.sift(&g, &x));
        }
        assert_eq!(reps.len(), 9);
    }

    #[test]
    fn basis_is_canonical_across_generating_sets() {
        let g = heisenberg27();
        let a = g.gen(0);
        let b = g.gen(1);
        let ab = g.mul(&a, &b);
        let s1 = g.span(&[a, b]);
        let s2 = g.span(&[ab, b, g.commutator(&a, &b)]);
        assert_eq!(s1, s2);
        assert_eq!(s1.key(&g), s2.key(&g));
    }

    #[test]
    fn subgroup_elements_enumeration() {
        let g = heisenberg27();
        let phi = g.frattini();
        let elts = phi.elements(&g);
        assert_eq!(elts.len(), 3);
        let uniq: HashSet<_> = elts.iter().copied().collect();
        assert_eq!(uniq.len(), 3);
        for x in &elts {
            assert!(phi.contains(&g, x));
        }
    }
}
