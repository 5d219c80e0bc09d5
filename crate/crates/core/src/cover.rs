//! p-covering groups, p-multiplicator, nucleus, free quotients and
//! immediate descendants.
//!
//! The cover of a class-c group G is built by the tails method: every
//! non-defining relation gains one new central elementary generator, the
//! weighted consistency checks are harvested for relations among the
//! tails, and the dead tails are eliminated by substitution. The
//! multiplicator is the span of the surviving tails, the nucleus is
//! P_c of the cover, and immediate descendants are quotients by orbit
//! representatives of allowable subgroups under the lifted automorphism
//! action.

use crate::fp::{self, FpSubspace};
use crate::pcgroup::{
    extend_images, is_homomorphism, standardize, Definition, Element, PcGroup, Standardizer,
    Subgroup, Word, MAX_GENS,
};
use crate::{Error, Result};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone)]
pub struct CoverData {
    pub base: Arc<PcGroup>,
    pub cover: Arc<PcGroup>,
    /// Subgroup of the cover spanned by the surviving tails.
    pub multiplicator: Subgroup,
    /// P_c(cover), c the p-class of the base.
    pub nucleus: Subgroup,
    pub multiplicator_rank: usize,
    pub nuclear_rank: usize,
}

impl CoverData {
    /// Difference between p-multiplicator rank and nuclear rank.
    pub fn h(&self) -> usize {
        self.multiplicator_rank - self.nuclear_rank
    }

    /// Coordinates of a multiplicator element over the tail basis.
    pub fn tail_coords(&self, x: &Element) -> Vec<u8> {
        let n = self.base.ngens();
        debug_assert!(x.exponents()[..n].iter().all(|&e| e == 0));
        x.exponents()[n..].to_vec()
    }

    /// Multiplicator element from tail coordinates.
    pub fn from_tail_coords(&self, v: &[u8]) -> Element {
        let n = self.base.ngens();
        let mut x = Element::identity(self.cover.ngens());
        for (k, &e) in v.iter().enumerate() {
            x.set_exponent(n + k, e);
        }
        x
    }

    /// The nucleus as a subspace in tail coordinates.
    pub fn nucleus_subspace(&self) -> FpSubspace {
        let rows: Vec<Vec<u8>> = self
            .nucleus
            .basis()
            .iter()
            .map(|b| self.tail_coords(b))
            .collect();
        FpSubspace::from_rows(self.multiplicator_rank, rows, self.base.prime())
    }
}

/// Construct the p-covering group of a standardized group.
pub fn p_cover(base: &Arc<PcGroup>) -> Result<CoverData> {
    let g = base.as_ref();
    assert!(
        g.is_weighted(),
        "p_cover needs a standardized (weighted) group"
    );
    let n = g.ngens();
    let p = g.prime();
    let class = g.weights().last().copied().unwrap_or(0).max(1);
    // Which relation defines which generator.
    let mut def_of_power = vec![false; n];
    let mut def_of_comm = vec![false; n * n.saturating_sub(1) / 2];
    for t in 0..n {
        match g.definition(t) {
            Some(Definition::Pow(i)) => def_of_power[i] = true,
            Some(Definition::Comm(j, i)) => def_of_comm[PcGroup::cidx(j, i)] = true,
            None => {}
        }
    }
    // Tail slots: one per non-defining relation.
    let mut tail_of_power = vec![usize::MAX; n];
    let mut tail_of_comm = vec![usize::MAX; n * n.saturating_sub(1) / 2];
    let mut q0 = 0usize;
    for i in 0..n {
        if !def_of_power[i] {
            tail_of_power[i] = q0;
            q0 += 1;
        }
    }
    for j in 1..n {
        for i in 0..j {
            let ci = PcGroup::cidx(j, i);
            if !def_of_comm[ci] {
                tail_of_comm[ci] = q0;
                q0 += 1;
            }
        }
    }
    let nn = n + q0;
    if nn > MAX_GENS {
        return Err(Error::Budget {
            what: "tentative cover generators",
            limit: MAX_GENS as u64,
            needed: nn as u64,
        });
    }
    let with_tail = |w: &Word, tail: usize| -> Word {
        let mut v = w.0.clone();
        if tail != usize::MAX {
            v.push(((n + tail) as u16, 1));
        }
        Word(v)
    };
    let mut power = Vec::with_capacity(nn);
    for i in 0..n {
        power.push(with_tail(g.power_word(i), tail_of_power[i]));
    }
    power.extend(std::iter::repeat(Word::empty()).take(q0));
    let mut comm = vec![Word::empty(); nn * (nn - 1) / 2];
    for j in 1..n {
        for i in 0..j {
            let ci = PcGroup::cidx(j, i);
            comm[PcGroup::cidx(j, i)] = with_tail(g.comm_word(j, i), tail_of_comm[ci]);
        }
    }
    let mut weights: Vec<u32> = g.weights().to_vec();
    weights.extend(std::iter::repeat(class + 1).take(q0));
    let mut defs: Vec<Option<Definition>> = (0..n).map(|t| g.definition(t)).collect();
    let mut tail_defs = vec![None; q0];
    for i in 0..n {
        if tail_of_power[i] != usize::MAX {
            tail_defs[tail_of_power[i]] = Some(Definition::Pow(i));
        }
    }
    for j in 1..n {
        for i in 0..j {
            let ci = PcGroup::cidx(j, i);
            if tail_of_comm[ci] != usize::MAX {
                tail_defs[tail_of_comm[ci]] = Some(Definition::Comm(j, i));
            }
        }
    }
    defs.extend(tail_defs);
    let tentative = PcGroup::new_unchecked(p, nn, g.rank(), weights, power, comm, defs)?;
    // Harvest tail relations from the full consistency test set. Weighted
    // subsets of the checks are not sound here: associativity overlaps
    // whose generator weights sum past the target class still produce
    // nontrivial tail relations.
    let defects = tentative.consistency_defects_bounded(None);
    let mut rows: Vec<Vec<u8>> = Vec::with_capacity(defects.len());
    for (l, r) in &defects {
        debug_assert_eq!(
            &l.exponents()[..n],
            &r.exponents()[..n],
            "cover defect must live in the tail space"
        );
        let mut row = vec![0u8; q0];
        for k in 0..q0 {
            row[k] =
                ((l.exponent(n + k) as u16 + (p - r.exponent(n + k)) as u16) % p as u16) as u8;
        }
        if row.iter().any(|&x| x != 0) {
            rows.push(row);
        }
    }
    let dead = FpSubspace::from_rows(q0, rows, p);
    // Substitution: a dead tail (lead of a row) equals the inverse of the
    // rest of its row, supported on later surviving tails.
    let mut subst: HashMap<usize, Vec<(usize, u8)>> = HashMap::new();
    for row in &dead.rows {
        let lead = row.iter().position(|&x| x != 0).unwrap();
        debug_assert_eq!(row[lead], 1);
        let expr: Vec<(usize, u8)> = (lead + 1..q0)
            .filter(|&k| row[k] != 0)
            .map(|k| (k, p - row[k]))
            .collect();
        subst.insert(lead, expr);
    }
    let survivors: Vec<usize> = (0..q0).filter(|k| !subst.contains_key(k)).collect();
    let q = survivors.len();
    let new_tail_idx = {
        let mut map = vec![usize::MAX; q0];
        for (ni, &k) in survivors.iter().enumerate() {
            map[k] = ni;
        }
        map
    };
    let m = n + q;
    let rewrite = |w: &Word| -> Word {
        let mut tail_acc = vec![0u16; q0];
        let mut old_part: Vec<(u16, u8)> = Vec::new();
        for &(idx, e) in &w.0 {
            let idx = idx as usize;
            if idx < n {
                old_part.push((idx as u16, e));
            } else {
                let k = idx - n;
                match subst.get(&k) {
                    None => tail_acc[k] += e as u16,
                    Some(expr) => {
                        for &(k2, c) in expr {
                            debug_assert!(!subst.contains_key(&k2));
                            tail_acc[k2] += e as u16 * c as u16;
                        }
                    }
                }
            }
        }
        let mut v = old_part;
        for &k in &survivors {
            let e = (tail_acc[k] % p as u16) as u8;
            if e != 0 {
                v.push(((n + new_tail_idx[k]) as u16, e));
            }
        }
        Word(v)
    };
    let mut power2 = Vec::with_capacity(m);
    for i in 0..n {
        power2.push(rewrite(tentative.power_word(i)));
    }
    power2.extend(std::iter::repeat(Word::empty()).take(q));
    let mut comm2 = vec![Word::empty(); m * (m.saturating_sub(1)) / 2];
    for j in 1..n {
        for i in 0..j {
            comm2[PcGroup::cidx(j, i)] = rewrite(tentative.comm_word(j, i));
        }
    }
    let mut weights2: Vec<u32> = g.weights().to_vec();
    weights2.extend(std::iter::repeat(class + 1).take(q));
    let mut defs2: Vec<Option<Definition>> = (0..n).map(|t| g.definition(t)).collect();
    let mut tail_defs2 = vec![None; q];
    for i in 0..n {
        let t = tail_of_power[i];
        if t != usize::MAX && new_tail_idx[t] != usize::MAX {
            tail_defs2[new_tail_idx[t]] = Some(Definition::Pow(i));
        }
    }
    for j in 1..n {
        for i in 0..j {
            let t = tail_of_comm[PcGroup::cidx(j, i)];
            if t != usize::MAX && new_tail_idx[t] != usize::MAX {
                tail_defs2[new_tail_idx[t]] = Some(Definition::Comm(j, i));
            }
        }
    }
    defs2.extend(tail_defs2);
    let cover = Arc::new(PcGroup::new(p, m, g.rank(), weights2, power2, comm2, defs2)?);
    let mult_gens: Vec<Element> = (n..m).map(|i| cover.gen(i)).collect();
    let multiplicator = cover.span(&mult_gens);
    debug_assert_eq!(multiplicator.order_exp(), q);
    let series = cover.lower_p_central();
    let nucleus = if (class as usize) <= series.len() {
        series[class as usize - 1].clone()
    } else {
        Subgroup::trivial()
    };
    debug_assert!(nucleus.subset_of(&cover, &multiplicator));
    Ok(CoverData {
        base: base.clone(),
        cover,
        nuclear_rank: nucleus.order_exp(),
        multiplicator,
        nucleus,
        multiplicator_rank: q,
    })
}

/// h(G): p-multiplicator rank minus nuclear rank.
pub fn h_rank(g: &Arc<PcGroup>) -> Result<usize> {
    Ok(p_cover(g)?.h())
}

/// d(M(G)) = multiplicator rank - d(G) for finite p-groups.
pub fn schur_multiplier_rank(g: &Arc<PcGroup>) -> Result<usize> {
    let c = p_cover(g)?;
    Ok(c.multiplicator_rank - g.rank())
}

/// A group is terminal iff its nucleus is trivial (no children).
pub fn is_terminal(g: &Arc<PcGroup>) -> Result<bool> {
    Ok(p_cover(g)?.nuclear_rank == 0)
}

/// The free class-c quotient W_{g,c} = F/P_c(F), realized by iterated
/// covers from the elementary abelian base: the cover of W_{g,c} is
/// exactly W_{g,c+1}.
pub fn free_quotient(p: u8, g: usize, c: u32) -> Result<Arc<PcGroup>> {
    assert!(g >= 1 && c >= 1);
    let mut w = Arc::new(PcGroup::elementary_abelian(p, g)?);
    for _ in 1..c {
        let cov = p_cover(&w)?;
        let std = standardize(cov.cover.clone())?;
        w = std.group;
    }
    Ok(w)
}

/// Budgets for descendant computation.
#[derive(Clone, Copy, Debug)]
pub struct DescendantBudget {
    pub max_mult_rank: usize,
    pub max_subspaces: u128,
}

impl Default for DescendantBudget {
    fn default() -> Self {
        DescendantBudget {
            max_mult_rank: 8,
            max_subspaces: 200_000,
        }
    }
}

/// Immediate descendants of a group, one per orbit of proper allowable
/// subgroups of the multiplicator under the lifted automorphism action.
pub struct Descendants {
    pub cover: CoverData,
    /// Standardized children in canonical order, with their step size s
    /// (child order = |G| * p^s).
    pub children: Vec<(Arc<PcGroup>, usize)>,
    /// Canonical key of each allowable subspace -> child index.
    pub orbit_of: HashMap<Vec<u8>, usize>,
}

/// Compute descendants given matrices for the automorphism action on the
/// multiplicator in tail coordinates (generators of Aut(G) lifted to the
/// cover; see `autgroup::mult_action`).
pub fn descendants_with_action(
    cover: CoverData,
    action: &[Vec<Vec<u8>>],
    budget: &DescendantBudget,
) -> Result<Descendants> {
    let p = cover.base.prime();
    let q = cover.multiplicator_rank;
    let nu = cover.nuclear_rank;
    if nu == 0 {
        return Ok(Descendants {
            cover,
            children: Vec::new(),
            orbit_of: HashMap::new(),
        });
    }
    if q > budget.max_mult_rank {
        return Err(Error::Budget {
            what: "multiplicator rank",
            limit: budget.max_mult_rank as u64,
            needed: q as u64,
        });
    }
    let mut total: u128 = 0;
    for k in q - nu..q {
        total += fp::gaussian_binomial(q, k, p);
    }
    if total > budget.max_subspaces {
        return Err(Error::Budget {
            what: "allowable subspaces",
            limit: budget.max_subspaces.min(u64::MAX as u128) as u64,
            needed: total.min(u64::MAX as u128) as u64,
        });
    }
    let nucleus_space = cover.nucleus_subspace();
    // Allowable subspaces: proper, supplementing the nucleus (M + N = V),
    // of dimension q - s for step s in 1..=nu.
    let mut allowable: Vec<FpSubspace> = Vec::new();
    for dim in (q - nu)..q {
        for s in fp::subspaces_of_dim(q, dim, p) {
            if s.join(&nucleus_space, p).dim() == q {
                allowable.push(s);
            }
        }
    }
    let mut orbit_of: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut reps: Vec<FpSubspace> = Vec::new();
    for s in &allowable {
        if orbit_of.contains_key(&s.key()) {
            continue;
        }
        let id = reps.len();
        let mut stack = vec![s.clone()];
        orbit_of.insert(s.key(), id);
        while let Some(u) = stack.pop() {
            for m in action {
                let v = u.apply(m, p);
                if !orbit_of.contains_key(&v.key()) {
                    orbit_of.insert(v.key(), id);
                    stack.push(v);
                }
            }
        }
        reps.push(s.clone());
    }
    let mut children = Vec::with_capacity(reps.len());
    for rep in &reps {
        let gens: Vec<Element> = rep
            .rows
            .iter()
            .map(|r| cover.from_tail_coords(r))
            .collect();
        let msub = cover.cover.span(&gens);
        let (raw, _) = cover.cover.raw_quotient(&msub)?;
        let std = standardize(Arc::new(raw))?;
        let s = q - rep.dim();
        children.push((std.group, s));
    }
    Ok(Descendants {
        cover,
        children,
        orbit_of,
    })
}

/// Natural epimorphism from the cover of `base` onto an elementary
/// abelian central extension `ext` of it (minimal generators map to
/// minimal generators).
pub fn natural_epi(cover: &CoverData, ext: &Arc<PcGroup>) -> Result<Vec<Element>> {
    let min_imgs: Vec<Element> = (0..cover.base.rank()).map(|i| ext.gen(i)).collect();
    let imgs = extend_images(&cover.cover, ext, &min_imgs)?;
    if !is_homomorphism(&cover.cover, ext, &imgs) {
        return Err(Error::Structural(
            "cover does not map onto the claimed central extension".into(),
        ));
    }
    Ok(imgs)
}

/// Re-export for callers that standardize raw quotients of covers.
pub fn standardize_group(raw: Arc<PcGroup>) -> Result<Standardizer> {
    standardize(raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn heisenberg() -> Arc<PcGroup> {
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
    fn cover_of_elementary_abelian_is_free_class_two() {
        let g = Arc::new(PcGroup::elementary_abelian(3, 2).unwrap());
        let c = p_cover(&g).unwrap();
        assert_eq!(c.cover.order_exp(), 5); // order 3^5
        assert_eq!(c.multiplicator_rank, 3);
        assert_eq!(c.nuclear_rank, 3); // free quotients: nucleus = multiplicator
        assert_eq!(c.h(), 0);
        assert_eq!(c.cover.p_class(), 2);
    }

    #[test]
    fn cover_of_cyclic_is_next_cyclic() {
        for c in 1..4 {
            let g = Arc::new(PcGroup::cyclic(3, c).unwrap());
            let cov = p_cover(&g).unwrap();
            assert_eq!(cov.cover.order_exp(), c + 1);
            assert_eq!(cov.multiplicator_rank, 1);
            assert_eq!(cov.nuclear_rank, 1);
            // Trivial Schur multiplier yet nontrivial nucleus.
            assert_eq!(schur_multiplier_rank(&g).unwrap(), 0);
            assert!(!is_terminal(&g).unwrap());
        }
    }

    #[test]
    fn heisenberg_cover_has_h_two() {
        let g = heisenberg();
        let c = p_cover(&g).unwrap();
        assert_eq!(c.h(), 2);
        assert!(c.cover.consistency_defects().is_empty());
    }

    #[test]
    fn free_quotient_sizes() {
        let w21 = free_quotient(3, 2, 1).unwrap();
        assert_eq!(w21.order(), 9);
        let w22 = free_quotient(3, 2, 2).unwrap();
        assert_eq!(w22.order_exp(), 5);
        assert_eq!(w22.p_class(), 2);
        assert_eq!(w22.abelian_invariants().values(), vec![9, 9]);
    }

    #[test]
    fn elementary_abelian_multiplier_rank_one() {
        let g = Arc::new(PcGroup::elementary_abelian(3, 2).unwrap());
        assert_eq!(schur_multiplier_rank(&g).unwrap(), 1);
        assert!(!is_terminal(&g).unwrap());
    }

    #[test]
    fn final_covers_pass_full_consistency() {
        for g in [
            Arc::new(PcGroup::elementary_abelian(3, 2).unwrap()),
            Arc::new(PcGroup::cyclic(3, 2).unwrap()),
            heisenberg(),
            free_quotient(3, 2, 2).unwrap(),
        ] {
            let c = p_cover(&g).unwrap();
            assert!(c.cover.consistency_defects().is_empty());
            assert_eq!(c.cover.order_exp(), g.order_exp() + c.multiplicator_rank);
        }
    }

    #[test]
    fn iterated_cover_gives_free_quotients() {
        let w22 = free_quotient(3, 2, 2).unwrap();
        let c = p_cover(&w22).unwrap();
        let w23 = free_quotient(3, 2, 3).unwrap();
        assert_eq!(c.cover.order_exp(), w23.order_exp());
        assert_eq!(c.cover.p_class(), 3);
        assert_eq!(c.h(), 0);
    }
}
