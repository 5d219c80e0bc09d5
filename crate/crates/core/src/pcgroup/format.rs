//! Text interchange format for pc presentations.
//!
//! Header `p <prime> n <ngens> d <rank>`, then one line per nontrivial
//! relation: `P i : <word>` for a_i^p and `C j i : <word>` for [a_j, a_i],
//! with words as space-separated `g<k>^<e>` factors and 1-based indices.
//! An empty word denotes the identity.

use super::{Definition, PcGroup, Word};
use crate::{Error, Result};

impl PcGroup {
    pub fn to_text(&self) -> String {
        let mut out = format!("p {} n {} d {}\n", self.prime(), self.ngens(), self.rank());
        let word_str = |w: &Word| -> String {
            w.0.iter()
                .map(|&(i, e)| format!("g{}^{}", i + 1, e))
                .collect::<Vec<_>>()
                .join(" ")
        };
        for i in 0..self.ngens() {
            let w = self.power_word(i);
            if !w.is_empty() {
                out.push_str(&format!("P {} : {}\n", i + 1, word_str(w)));
            }
        }
        for j in 1..self.ngens() {
            for i in 0..j {
                let w = self.comm_word(j, i);
                if !w.is_empty() {
                    out.push_str(&format!("C {} {} : {}\n", j + 1, i + 1, word_str(w)));
                }
            }
        }
        out
    }

    /// Parse the text format. The returned group is consistency-checked;
    /// weights and definitions are reconstructed when the presentation
    /// carries exact defining relations (as printed presentations do),
    /// otherwise the group is left raw.
    pub fn from_text(text: &str) -> Result<PcGroup> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        let (hline_no, header) = lines
            .next()
            .ok_or_else(|| Error::Parse {
                line: 0,
                msg: "empty presentation".into(),
            })?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        let perr = |line: usize, msg: &str| Error::Parse {
            line: line + 1,
            msg: msg.to_string(),
        };
        if toks.len() != 6 || toks[0] != "p" || toks[2] != "n" || toks[4] != "d" {
            return Err(perr(hline_no, "header must be `p <prime> n <ngens> d <rank>`"));
        }
        let p: u8 = toks[1].parse().map_err(|_| perr(hline_no, "bad prime"))?;
        let n: usize = toks[3].parse().map_err(|_| perr(hline_no, "bad ngens"))?;
        let d: usize = toks[5].parse().map_err(|_| perr(hline_no, "bad rank"))?;
        let mut power = vec![Word::empty(); n];
        let mut comm = vec![Word::empty(); n * n.saturating_sub(1) / 2];
        for (line_no, line) in lines {
            let (head, word) = line
                .split_once(':')
                .ok_or_else(|| perr(line_no, "relation line needs `:`"))?;
            let htoks: Vec<&str> = head.split_whitespace().collect();
            let mut w = Vec::new();
            for f in word.split_whitespace() {
                let f = f
                    .strip_prefix('g')
                    .ok_or_else(|| perr(line_no, "factor must look like g<k>^<e>"))?;
                let (i, e) = f
                    .split_once('^')
                    .ok_or_else(|| perr(line_no, "factor must look like g<k>^<e>"))?;
                let i: usize = i.parse().map_err(|_| perr(line_no, "bad generator index"))?;
                let e: u8 = e.parse().map_err(|_| perr(line_no, "bad exponent"))?;
                if i < 1 || i > n {
                    return Err(perr(line_no, "generator index out of range"));
                }
                w.push(((i - 1) as u16, e));
            }
            match htoks.as_slice() {
                ["P", i] => {
                    let i: usize = i.parse().map_err(|_| perr(line_no, "bad index"))?;
                    if i < 1 || i > n {
                        return Err(perr(line_no, "power index out of range"));
                    }
                    power[i - 1] = Word(w);
                }
                ["C", j, i] => {
                    let j: usize = j.parse().map_err(|_| perr(line_no, "bad index"))?;
                    let i: usize = i.parse().map_err(|_| perr(line_no, "bad index"))?;
                    if !(1 <= i && i < j && j <= n) {
                        return Err(perr(line_no, "commutator indices out of range"));
                    }
                    comm[PcGroup::cidx(j - 1, i - 1)] = Word(w);
                }
                _ => return Err(perr(line_no, "relation must start with `P i` or `C j i`")),
            }
        }
        let raw = PcGroup::new(p, n, d, vec![], power, comm, vec![])
            .map_err(|e| Error::Parse {
                line: 0,
                msg: e.to_string(),
            })?;
        Ok(reconstruct_weights(raw).unwrap_or_else(|r| r))
    }
}

/// Try to recover exact weights and definitions: each generator beyond the
/// first d needs a relation whose word is exactly `g_t^1`, and weights from
/// the lower p-central series must be compatible with the ordering.
fn reconstruct_weights(raw: PcGroup) -> std::result::Result<PcGroup, PcGroup> {
    let n = raw.ngens();
    let series = raw.lower_p_central();
    let mut weights = vec![0u32; n];
    for i in 0..n {
        let mut w = 1;
        for term in &series {
            if term.contains(&raw, &raw.gen(i)) {
                w += 1;
            }
        }
        weights[i] = w;
    }
    if weights.windows(2).any(|w| w[0] > w[1]) {
        return Err(raw);
    }
    let d = weights.iter().filter(|&&w| w == 1).count();
    // Exact weights also require that the weight filtration matches spans.
    for (k, term) in series.iter().enumerate() {
        let expect: usize = weights.iter().filter(|&&w| w > k as u32 + 1).count();
        if term.order_exp() != expect {
            return Err(raw);
        }
    }
    let mut defs: Vec<Option<Definition>> = vec![None; n];
    for t in d..n {
        let mut found = None;
        'scan: for i in 0..n {
            if raw.power_word(i).0 == vec![(t as u16, 1)] {
                found = Some(Definition::Pow(i));
                break 'scan;
            }
            for j in (i + 1)..n {
                if raw.comm_word(j, i).0 == vec![(t as u16, 1)] {
                    found = Some(Definition::Comm(j, i));
                    break 'scan;
                }
            }
        }
        match found {
            Some(def) => defs[t] = Some(def),
            None => return Err(raw),
        }
    }
    match PcGroup::new(
        raw.prime(),
        n,
        d,
        weights,
        (0..n).map(|i| raw.power_word(i).clone()).collect(),
        {
            let mut c = vec![Word::empty(); n * n.saturating_sub(1) / 2];
            for j in 1..n {
                for i in 0..j {
                    c[PcGroup::cidx(j, i)] = raw.comm_word(j, i).clone();
                }
            }
            c
        },
        defs,
    ) {
        Ok(g) => Ok(g),
        Err(_) => Err(raw),
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::heisenberg27;
    use super::*;

    #[test]
    fn print_parse_round_trip() {
        let g = heisenberg27();
        let text = g.to_text();
        let h = PcGroup::from_text(&text).unwrap();
        assert_eq!(h.to_text(), text);
        assert_eq!(h.order(), 27);
        assert!(h.is_weighted());
        assert_eq!(h.weights(), g.weights());
    }

    #[test]
    fn parse_error_reports_line() {
        let bad = "p 3 n 2 d 2\nC 2 1 : g9^1\n";
        match PcGroup::from_text(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
