//! Quotient presentations and standardization.
//!
//! `raw_quotient` derives a consistent pc presentation of G/N on the
//! generators whose indices survive sifting by N. `standardize` rebuilds
//! any consistent presentation as a weighted one: new generators are
//! picked layer by layer along the lower p-central series, every
//! non-minimal generator acquiring an exact power or commutator
//! definition. Quotient consistency is automatic (the derived relations
//! present a group of order at most p^m that surjects onto the true
//! quotient of order p^m), but the mandatory check still runs.

use super::{Definition, Element, PcGroup, Subgroup, Word};
use crate::{Error, Result};
use std::sync::Arc;

/// A homomorphism between pc groups, stored by images of all source
/// generators.
#[derive(Clone)]
pub struct Homomorphism {
    pub dst: Arc<PcGroup>,
    pub images: Vec<Element>,
}

impl Homomorphism {
    pub fn apply(&self, x: &Element) -> Element {
        self.dst.apply_images(&self.images, x)
    }
}

impl PcGroup {
    /// Raw quotient presentation of G/N. Returns the unweighted group and
    /// the ambient indices of the surviving generators.
    pub fn raw_quotient(&self, n_sub: &Subgroup) -> Result<(PcGroup, Vec<usize>)> {
        if !n_sub.is_normal(self) {
            return Err(Error::NotNormal);
        }
        let leads = n_sub.leads();
        let survivors: Vec<usize> = (0..self.ngens()).filter(|i| !leads.contains(i)).collect();
        let m = survivors.len();
        let newidx = {
            let mut map = vec![usize::MAX; self.ngens()];
            for (ni, &oi) in survivors.iter().enumerate() {
                map[oi] = ni;
            }
            map
        };
        let read_off = |rep: &Element| -> Word {
            let mut w = Vec::new();
            for (i, f) in rep.factors() {
                debug_assert_ne!(newidx[i], usize::MAX, "sifted rep hit a dead index");
                w.push((newidx[i] as u16, f));
            }
            Word(w)
        };
        let mut power = Vec::with_capacity(m);
        for &s in &survivors {
            let z = self.pow(&self.gen(s), self.prime() as u32);
            power.push(read_off(&n_sub.sift(self, &z)));
        }
        let mut comm = vec![Word::empty(); m * (m.saturating_sub(1)) / 2];
        for (nj, &sj) in survivors.iter().enumerate() {
            for (ni, &si) in survivors.iter().enumerate().take(nj) {
                let z = self.commutator(&self.gen(sj), &self.gen(si));
                comm[PcGroup::cidx(nj, ni)] = read_off(&n_sub.sift(self, &z));
            }
        }
        let d_prov = if self.is_weighted() {
            survivors.iter().filter(|&&s| s < self.rank()).count()
        } else {
            0
        };
        let q = PcGroup::new(self.prime(), m, d_prov, vec![], power, comm, vec![])?;
        Ok((q, survivors))
    }

    /// Fast class-k quotient of a standardized group: drop all generators
    /// of weight exceeding k and truncate relation words. The result keeps
    /// exact weights and definitions.
    pub fn truncate_class(&self, k: u32) -> Result<PcGroup> {
        assert!(self.is_weighted(), "truncate_class needs a weighted group");
        let m = self.weights().iter().filter(|&&w| w <= k).count();
        let trunc = |w: &Word| -> Word {
            Word(
                w.0.iter()
                    .filter(|&&(i, _)| (i as usize) < m)
                    .copied()
                    .collect(),
            )
        };
        let mut power = Vec::with_capacity(m);
        for i in 0..m {
            power.push(trunc(self.power_word(i)));
        }
        let mut comm = vec![Word::empty(); m * (m.saturating_sub(1)) / 2];
        for j in 1..m {
            for i in 0..j {
                comm[PcGroup::cidx(j, i)] = trunc(self.comm_word(j, i));
            }
        }
        let mut defs = Vec::with_capacity(m);
        for t in 0..m {
            // A surviving generator's defining relation may have lost its
            // last factor only if that factor was the generator itself,
            // which survives; definitions stay valid verbatim.
            defs.push(self.definition(t));
        }
        PcGroup::new(
            self.prime(),
            m,
            self.rank().min(m),
            self.weights()[..m].to_vec(),
            power,
            comm,
            defs,
        )
    }
}

/// Weighted presentation rebuilt from an arbitrary consistent one, with
/// the translation data needed to move elements across.
pub struct Standardizer {
    pub raw: Arc<PcGroup>,
    pub group: Arc<PcGroup>,
    /// New generators as elements of the raw group, in weight order.
    pub picks: Vec<Element>,
    /// tails[t] = subgroup of raw generated by picks[t..].
    tails: Vec<Subgroup>,
}

impl Standardizer {
    /// Coordinates of a raw element relative to the picks: the normal form
    /// of its image in the standardized group.
    pub fn express(&self, x: &Element) -> Element {
        let g = &*self.raw;
        let p = g.prime();
        let m = self.picks.len();
        let mut cur = *x;
        let mut out = Element::identity(m);
        for t in 0..m {
            let mut hit = false;
            for e in 0..p {
                let cand = if e == 0 {
                    cur
                } else {
                    g.mul(&g.inv(&g.pow(&self.picks[t], e as u32)), &cur)
                };
                if self.tails[t + 1].contains(g, &cand) {
                    out.e[t] = e;
                    cur = cand;
                    hit = true;
                    break;
                }
            }
            assert!(hit, "express: element escaped the pick filtration");
        }
        debug_assert!(cur.is_identity());
        out
    }

    /// Image of a raw element in the standardized group (same as express).
    pub fn project(&self, x: &Element) -> Element {
        self.express(x)
    }
}

/// Rebuild `raw` as a weighted presentation with exact definitions.
pub fn standardize(raw: Arc<PcGroup>) -> Result<Standardizer> {
    let g = &*raw;
    let p = g.prime();
    let n = g.ngens();
    if n == 0 {
        let trivial = PcGroup::new(p, 0, 0, vec![], vec![], vec![], vec![])?;
        return Ok(Standardizer {
            raw: raw.clone(),
            group: Arc::new(trivial),
            picks: vec![],
            tails: vec![Subgroup::trivial()],
        });
    }
    let series = g.lower_p_central();
    let class = series.len();
    let mut picks: Vec<Element> = Vec::with_capacity(n);
    let mut weights: Vec<u32> = Vec::with_capacity(n);
    let mut defs: Vec<Option<Definition>> = Vec::with_capacity(n);
    let mut layer_starts: Vec<usize> = Vec::with_capacity(class + 1);

    for k in 1..=class {
        layer_starts.push(picks.len());
        let deeper = &series[k - 1]; // E_k
        let mut acc = deeper.clone();
        let mut candidates: Vec<(Element, Option<Definition>)> = Vec::new();
        if k == 1 {
            for i in 0..n {
                candidates.push((g.gen(i), None));
            }
        } else {
            let (lo, hi) = (layer_starts[k - 2], layer_starts[k - 1]);
            let d = layer_starts[1];
            for u in lo..hi {
                // Keep j > i for the Comm(j, i) definition shape; at layer 2
                // both arguments are minimal and [a, u] spans the same line.
                for a in 0..d.min(u) {
                    candidates.push((
                        g.commutator(&picks[u], &picks[a]),
                        Some(Definition::Comm(u, a)),
                    ));
                }
            }
            for u in lo..hi {
                candidates.push((g.pow(&picks[u], p as u32), Some(Definition::Pow(u))));
            }
        }
        for (cand, def) in candidates {
            if !acc.contains(g, &cand) {
                acc = acc.join(g, &g.span(&[cand]));
                picks.push(cand);
                weights.push(k as u32);
                defs.push(def);
            }
        }
        // The candidates must span the layer.
        let expected = if k == 1 {
            n - series[0].order_exp()
        } else {
            series[k - 2].order_exp() - series[k - 1].order_exp()
        };
        let got = picks.len() - layer_starts[k - 1];
        if got != expected {
            return Err(Error::Structural(format!(
                "standardize: layer {k} spanned {got} of {expected} dimensions"
            )));
        }
    }
    layer_starts.push(picks.len());
    let m = picks.len();
    debug_assert_eq!(m, n);
    let d = layer_starts[1];

    // Suffix subgroups for the peel.
    let mut tails = vec![Subgroup::trivial(); m + 1];
    for t in (0..m).rev() {
        tails[t] = tails[t + 1].join(g, &g.span(&[picks[t]]));
        debug_assert_eq!(tails[t].order_exp(), m - t);
    }

    let helper = Standardizer {
        raw: raw.clone(),
        group: Arc::new(PcGroup::new(p, 0, 0, vec![], vec![], vec![], vec![])?),
        picks: picks.clone(),
        tails: tails.clone(),
    };

    let mut power = Vec::with_capacity(m);
    for t in 0..m {
        let z = g.pow(&picks[t], p as u32);
        power.push(Word::from_element(&helper.express(&z)));
    }
    let mut comm = vec![Word::empty(); m * (m.saturating_sub(1)) / 2];
    for j in 1..m {
        for i in 0..j {
            let z = g.commutator(&picks[j], &picks[i]);
            comm[PcGroup::cidx(j, i)] = Word::from_element(&helper.express(&z));
        }
    }
    let group = PcGroup::new(p, m, d, weights, power, comm, defs)?;
    Ok(Standardizer {
        raw,
        group: Arc::new(group),
        picks,
        tails,
    })
}

impl PcGroup {
    /// Quotient by a normal subgroup: a standardized presentation of G/N
    /// plus the projection map.
    pub fn quotient(self: &Arc<Self>, n_sub: &Subgroup) -> Result<(Arc<PcGroup>, Homomorphism)> {
        let (rawq, survivors) = self.raw_quotient(n_sub)?;
        let rawq = Arc::new(rawq);
        let newidx = {
            let mut map = vec![usize::MAX; self.ngens()];
            for (ni, &oi) in survivors.iter().enumerate() {
                map[oi] = ni;
            }
            map
        };
        let std = standardize(rawq.clone())?;
        let mut images = Vec::with_capacity(self.ngens());
        for i in 0..self.ngens() {
            let rep = n_sub.sift(self, &self.gen(i));
            let mut raw_img = Element::identity(rawq.ngens());
            for (oi, f) in rep.factors() {
                raw_img.e[newidx[oi]] = f;
            }
            images.push(std.express(&raw_img));
        }
        Ok((
            std.group.clone(),
            Homomorphism {
                dst: std.group,
                images,
            },
        ))
    }

    /// Induced presentation of a subgroup on its echelon basis, as a raw
    /// group plus the basis (for coordinate mapping).
    pub fn subgroup_presentation(&self, h: &Subgroup) -> Result<PcGroup> {
        let m = h.order_exp();
        let basis = h.basis();
        // Coordinates of x in H: peel by leads (lead coefficients are 1).
        let express = |x: &Element| -> Word {
            let mut cur = *x;
            let mut w = Vec::new();
            for (i, b) in basis.iter().enumerate() {
                let l = b.lead().unwrap();
                let e = cur.exponent(l);
                if e != 0 {
                    w.push((i as u16, e));
                    cur = self.mul(&self.inv(&self.pow(b, e as u32)), &cur);
                }
            }
            assert!(
                cur.is_identity(),
                "subgroup_presentation: element escaped the basis"
            );
            Word(w)
        };
        let mut power = Vec::with_capacity(m);
        for b in basis {
            power.push(express(&self.pow(b, self.prime() as u32)));
        }
        let mut comm = vec![Word::empty(); m * (m.saturating_sub(1)) / 2];
        for j in 1..m {
            for i in 0..j {
                comm[PcGroup::cidx(j, i)] = express(&self.commutator(&basis[j], &basis[i]));
            }
        }
        PcGroup::new(self.prime(), m, 0, vec![], power, comm, vec![])
    }

    /// Subgroup as a standalone standardized group.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<Arc<PcGroup>> {
        let raw = Arc::new(self.subgroup_presentation(h)?);
        Ok(standardize(raw)?.group)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::heisenberg27;
    use super::*;

    #[test]
    fn quotient_by_trivial_is_isomorphic_presentation() {
        let g = Arc::new(heisenberg27());
        let (q, proj) = g.quotient(&Subgroup::trivial()).unwrap();
        assert_eq!(q.order(), 27);
        assert_eq!(q.rank(), 2);
        assert_eq!(q.p_class(), 2);
        // Projection respects multiplication on a sample.
        for a in g.elements().take(27) {
            for b in [g.gen(0), g.gen(1)] {
                let lhs = proj.apply(&g.mul(&a, &b));
                let rhs = q.mul(&proj.apply(&a), &proj.apply(&b));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn quotient_by_center_is_elementary_abelian() {
        let g = Arc::new(heisenberg27());
        let z = g.frattini();
        let (q, _) = g.quotient(&z).unwrap();
        assert_eq!(q.order(), 9);
        assert_eq!(q.p_class(), 1);
    }

    #[test]
    fn quotient_order_multiplicativity() {
        let g = Arc::new(heisenberg27());
        for gens in [
            vec![],
            vec![g.gen(2)],
            vec![g.gen(0)],
            vec![g.gen(0), g.gen(1)],
        ] {
            let n = g.normal_closure(&gens).unwrap();
            let (q, _) = g.quotient(&n).unwrap();
            assert_eq!(q.order() * n.order(&g), g.order());
        }
    }

    #[test]
    fn non_normal_rejected() {
        // In Heisenberg every subgroup containing the center is normal, so
        // pick a non-normal one: <a_1> (order 3, not containing center).
        let g = Arc::new(heisenberg27());
        let h = g.span(&[g.gen(0)]);
        assert_eq!(h.order(&g), 3);
        assert!(matches!(g.quotient(&h), Err(Error::NotNormal)));
    }

    #[test]
    fn truncate_class_one_is_frattini_quotient() {
        let g = heisenberg27();
        let t = g.truncate_class(1).unwrap();
        assert_eq!(t.order(), 9);
        assert_eq!(t.p_class(), 1);
    }

    #[test]
    fn standardize_assigns_exact_weights() {
        let g = Arc::new(heisenberg27());
        let std = standardize(g.clone()).unwrap();
        assert_eq!(std.group.weights(), &[1, 1, 2]);
        assert_eq!(std.group.rank(), 2);
        // P_1 of the standardized group is spanned by the weight-2 gens.
        let phi = std.group.frattini();
        assert_eq!(phi.leads(), vec![2]);
    }

    #[test]
    fn subgroup_as_group_of_frattini() {
        let g = heisenberg27();
        let phi = g.frattini();
        let h = g.subgroup_as_group(&phi).unwrap();
        assert_eq!(h.order(), 3);
    }
}
