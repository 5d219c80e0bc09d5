//! Abelian invariants by elementary-divisor reduction localized at p.
//!
//! All groups here are finite p-groups, so the abelianized relation
//! matrix only needs its p-part: pivots are chosen by minimal
//! p-valuation and the diagonal collects p-power divisors directly.

use super::{Element, PcGroup, Subgroup, Word};
use crate::{Error, Result};

/// Canonical invariants of a finite abelian p-group: ascending p-powers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianInvariants {
    p: u8,
    exps: Vec<u32>,
}

impl AbelianInvariants {
    pub fn new(p: u8, mut exps: Vec<u32>) -> Self {
        exps.retain(|&e| e > 0);
        exps.sort_unstable();
        AbelianInvariants { p, exps }
    }

    pub fn trivial(p: u8) -> Self {
        AbelianInvariants { p, exps: vec![] }
    }

    pub fn prime(&self) -> u8 {
        self.p
    }

    /// Exponents e with invariants p^e, ascending.
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn order_exp(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn values(&self) -> Vec<u128> {
        self.exps
            .iter()
            .map(|&e| (self.p as u128).pow(e))
            .collect()
    }

    /// Quotient order on abelian p-groups: self is a quotient of other iff
    /// the descending exponent lists compare componentwise.
    pub fn is_quotient_of(&self, other: &AbelianInvariants) -> bool {
        if self.p != other.p || self.rank() > other.rank() {
            return false;
        }
        let mut a: Vec<u32> = self.exps.clone();
        let mut b: Vec<u32> = other.exps.clone();
        a.sort_unstable_by(|x, y| y.cmp(x));
        b.sort_unstable_by(|x, y| y.cmp(x));
        a.resize(b.len(), 0);
        a.iter().zip(b.iter()).all(|(x, y)| x <= y)
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.values().iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Elementary divisor exponents of the p-local cokernel of the row span.
/// Errors if the quotient is infinite (cannot happen for valid pc data).
pub(crate) fn p_local_divisors(p: u8, rows: &[Vec<i128>], ncols: usize) -> Result<Vec<u32>> {
    if ncols == 0 {
        return Ok(vec![]);
    }
    let cap: u32 = (ncols as u32) + 2;
    // Exact i128 arithmetic with reduction mod p^cap; overflow guard.
    if (cap as f64) * (p as f64).ln() * 2.0 >= 126.0 * 2f64.ln() {
        return Err(Error::Budget {
            what: "abelian invariant matrix size",
            limit: 126,
            needed: (cap * 2) as u64,
        });
    }
    let modulus: i128 = (p as i128).pow(cap);
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.resize(ncols, 0);
            r.iter_mut().for_each(|x| *x = (*x).rem_euclid(modulus));
            r
        })
        .collect();
    // Ensure there are at least ncols rows to pivot on.
    let val = |x: i128| -> u32 {
        if x == 0 {
            return cap;
        }
        let mut v = 0;
        let mut y = x;
        while y % p as i128 == 0 {
            y /= p as i128;
            v += 1;
        }
        v
    };
    let inv_mod = |a: i128| -> i128 {
        // a coprime to p; extended Euclid mod p^cap.
        let (mut r0, mut r1) = (modulus, a.rem_euclid(modulus));
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        s0.rem_euclid(modulus)
    };
    let nrows = m.len();
    let mut out = Vec::with_capacity(ncols);
    let mut used_rows = vec![false; nrows];
    let mut used_cols = vec![false; ncols];
    for _ in 0..ncols {
        // Minimal-valuation pivot over the live submatrix.
        let mut best: Option<(usize, usize, u32)> = None;
        for i in 0..nrows {
            if used_rows[i] {
                continue;
            }
            for j in 0..ncols {
                if used_cols[j] || m[i][j] == 0 {
                    continue;
                }
                let v = val(m[i][j]);
                if best.map_or(true, |(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, v)) = best else {
            return Err(Error::Invalid(
                "abelianization is infinite: missing p-power relation".into(),
            ));
        };
        // Normalize the pivot row so the pivot is exactly p^v.
        let unit = m[pi][pj] / (p as i128).pow(v);
        let uinv = inv_mod(unit);
        for j in 0..ncols {
            m[pi][j] = (m[pi][j] * uinv).rem_euclid(modulus);
        }
        let pivot = (p as i128).pow(v);
        debug_assert_eq!(m[pi][pj], pivot.rem_euclid(modulus));
        for i in 0..nrows {
            if i == pi || used_rows[i] || m[i][pj] == 0 {
                continue;
            }
            let factor = m[i][pj] / pivot;
            debug_assert_eq!(m[i][pj] % pivot, 0);
            for j in 0..ncols {
                m[i][j] = (m[i][j] - factor * m[pi][j]).rem_euclid(modulus);
            }
        }
        used_rows[pi] = true;
        used_cols[pj] = true;
        out.push(v.min(cap));
    }
    Ok(out)
}

fn exponent_sum_row(n: usize, w: &Word) -> Vec<i128> {
    let mut row = vec![0i128; n];
    for &(i, e) in &w.0 {
        row[i as usize] += e as i128;
    }
    row
}

fn invariants_of_presentation(g: &PcGroup) -> Result<AbelianInvariants> {
    let n = g.ngens();
    let p = g.prime();
    let mut rows = Vec::with_capacity(n + n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        let mut row = exponent_sum_row(n, g.power_word(i));
        row[i] -= p as i128;
        rows.push(row);
    }
    for j in 1..n {
        for i in 0..j {
            rows.push(exponent_sum_row(n, g.comm_word(j, i)));
        }
    }
    let divisors = p_local_divisors(p, &rows, n)?;
    Ok(AbelianInvariants::new(p, divisors))
}

impl PcGroup {
    /// Canonical invariants of G/[G,G].
    pub fn abelian_invariants(&self) -> AbelianInvariants {
        invariants_of_presentation(self).expect("pc group has finite abelianization")
    }

    /// Canonical invariants of H/[H,H] for a subgroup, via its induced
    /// presentation.
    pub fn subgroup_abelian_invariants(&self, h: &Subgroup) -> Result<AbelianInvariants> {
        let pres = self.subgroup_presentation(h)?;
        invariants_of_presentation(&pres)
    }

    /// The (p^d - 1)/(p - 1) subgroups of index p: preimages of the
    /// hyperplanes of G/Phi(G). Requires a standardized (weighted) group.
    pub fn index_p_subgroups(&self) -> Vec<Subgroup> {
        assert!(
            self.is_weighted(),
            "index_p_subgroups needs a standardized group"
        );
        let d = self.rank();
        let p = self.prime();
        assert!(d >= 1, "index-p subgroups need rank at least 1");
        let n = self.ngens();
        // Frattini basis: unit vectors at positions d..n (exact weights).
        let phi_gens: Vec<Element> = (d..n).map(|i| self.gen(i)).collect();
        let mut out = Vec::new();
        // Hyperplanes of F_p^d by normal vector with first nonzero = 1.
        let mut normal = vec![0u8; d];
        loop {
            // advance to next vector
            let mut k = d;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                normal[k] += 1;
                if normal[k] < p {
                    break;
                }
                normal[k] = 0;
            }
            if normal.iter().find(|&&x| x != 0) != Some(&1) {
                continue;
            }
            // Basis of the hyperplane { v : <normal, v> = 0 }.
            let lead = normal.iter().position(|&x| x != 0).unwrap();
            let mut gens = phi_gens.clone();
            for i in 0..d {
                if i == lead {
                    continue;
                }
                // v = e_i - normal[i] * e_lead satisfies the equation.
                let mut v = Element::identity(n);
                v.e[i] = 1;
                v.e[lead] = (p - normal[i]) % p;
                gens.push(v);
            }
            let h = Subgroup::closure(self, &gens, false);
            debug_assert_eq!(h.order_exp(), n - 1);
            out.push(h);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::heisenberg27;
    use super::*;

    #[test]
    fn heisenberg_abelianization() {
        let g = heisenberg27();
        let inv = g.abelian_invariants();
        assert_eq!(inv.values(), vec![3, 3]);
    }

    #[test]
    fn cyclic_abelianization() {
        let g = PcGroup::cyclic(3, 3).unwrap();
            assert_eq!(g.abelian_invariants().values(), vec![27]);
    }

    #[test]
    fn trivial_group_invariants_empty() {
        let g = PcGroup::new(3, 0, 0, vec![], vec![], vec![], vec![]).unwrap();
        assert!(g.abelian_invariants().values().is_empty());
    }

    #[test]
    fn invariants_times_derived_equals_order() {
        let g = heisenberg27();
        let inv = g.abelian_invariants();
        let derived = g.derived();
        let ab_order: u128 = inv.values().iter().product();
        assert_eq!(ab_order * derived.order(&g), g.order());
    }

    #[test]
    fn heisenberg_has_four_index3_subgroups() {
        let g = heisenberg27();
        let subs = g.index_p_subgroups();
        assert_eq!(subs.len(), 4);
        for h in &subs {
            assert_eq!(h.order(&g), 9);
            let inv = g.subgroup_abelian_invariants(h).unwrap();
            assert_eq!(inv.values(), vec![3, 3]);
        }
    }

    #[test]
    fn cyclic_nine_has_one_index3_subgroup() {
        let g = PcGroup::cyclic(3, 2).unwrap();
        let subs = g.index_p_subgroups();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].order(&g), 3);
    }

    #[test]
    fn quotient_partial_order() {
        let a33 = AbelianInvariants::new(3, vec![1, 1]);
        let a39 = AbelianInvariants::new(3, vec![1, 2]);
        let a9 = AbelianInvariants::new(3, vec![2]);
        assert!(a33.is_quotient_of(&a39));
        assert!(!a39.is_quotient_of(&a33));
        assert!(a9.is_quotient_of(&a39));
        assert!(!a9.is_quotient_of(&a33));
        assert!(a33.is_quotient_of(&a33));
    }
}
