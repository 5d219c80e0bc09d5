//! Small dense linear algebra over the prime field F_p (p < 256).
//!
//! Rows are `Vec<u8>` with entries reduced mod p. Everything here is
//! exact and deterministic; matrices stay tiny (dimension <= MAX_GENS).

pub(crate) fn mod_inv(a: u8, p: u8) -> u8 {
    let mut acc: u64 = 1;
    let mut base = (a % p) as u64;
    let mut e = p as u32 - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u8
}

/// Reduced row echelon form, in place; returns pivot column per row.
pub(crate) fn rref(rows: &mut Vec<Vec<u8>>, p: u8) -> Vec<usize> {
    rows.retain(|r| r.iter().any(|&x| x != 0));
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = mod_inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = (*x as u16 * inv as u16 % p as u16) as u8;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    let sub = (f as u16 * rows[r][j] as u16) % p as u16;
                    rows[i][j] = ((rows[i][j] as u16 + p as u16 - sub) % p as u16) as u8;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A subspace of F_p^n in canonical reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct FpSubspace {
    pub n: usize,
    pub rows: Vec<Vec<u8>>,
}

impl FpSubspace {
    pub fn zero(n: usize) -> Self {
        FpSubspace { n, rows: vec![] }
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<u8>>, p: u8) -> Self {
        let mut rows = rows;
        rref(&mut rows, p);
        FpSubspace { n, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn key(&self) -> Vec<u8> {
        let mut k = Vec::with_capacity(self.rows.len() * self.n);
        for r in &self.rows {
            k.extend_from_slice(r);
        }
        k
    }

    pub fn contains(&self, v: &[u8], p: u8) -> bool {
        let mut v = v.to_vec();
        for row in &self.rows {
            let c = row.iter().position(|&x| x != 0).unwrap();
            if v[c] != 0 {
                let f = v[c];
                for j in 0..self.n {
                    let sub = (f as u16 * row[j] as u16) % p as u16;
                    v[j] = ((v[j] as u16 + p as u16 - sub) % p as u16) as u8;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn join(&self, other: &FpSubspace, p: u8) -> FpSubspace {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        FpSubspace::from_rows(self.n, rows, p)
    }

    /// Image under a linear map given by a matrix acting on row vectors:
    /// v maps to v * m (m is n x n, row-major).
    pub fn apply(&self, m: &[Vec<u8>], p: u8) -> FpSubspace {
        let rows = self
            .rows
            .iter()
            .map(|r| mat_vec(m, r, p))
            .collect();
        FpSubspace::from_rows(self.n, rows, p)
    }
}

/// v * m for a row vector v and row-major matrix m (entries m[i][j] give
/// the image of basis vector i).
pub(crate) fn mat_vec(m: &[Vec<u8>], v: &[u8], p: u8) -> Vec<u8> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut out = vec![0u16; ncols];
    for (i, &vi) in v.iter().enumerate() {
        if vi != 0 {
            for j in 0..ncols {
                out[j] = (out[j] + vi as u16 * m[i][j] as u16) % p as u16;
            }
        }
    }
    out.into_iter().map(|x| x as u8).collect()
}

/// Right kernel of the matrix (rows are relations over variables =
/// columns): basis of { v : m v^T = 0 }.
pub(crate) fn kernel_basis(m: &[Vec<u8>], ncols: usize, p: u8) -> Vec<Vec<u8>> {
    let mut rows: Vec<Vec<u8>> = m.to_vec();
    let pivots = rref(&mut rows, p);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u8; ncols];
        v[free] = 1;
        for (ri, &pc) in pivots.iter().enumerate() {
            // pivot row: x_pc + sum coeff_j x_j = 0 => x_pc = -coeff_free
            let coeff = rows[ri][free];
            if coeff != 0 {
                v[pc] = p - coeff;
            }
        }
        basis.push(v);
    }
    basis
}

/// Left kernel of a matrix: basis of { v : v * m = 0 } where rows of m
/// are indexed by the coordinates of v.
pub(crate) fn kernel_basis_left(m: &[Vec<u8>], p: u8) -> Vec<Vec<u8>> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    // Transpose and take the right kernel.
    let mut t = vec![vec![0u8; nrows]; ncols];
    for i in 0..nrows {
        for j in 0..ncols {
            t[j][i] = m[i][j];
        }
    }
    kernel_basis(&t, nrows, p)
}

pub(crate) fn matrix_rank(m: &[Vec<u8>], p: u8) -> usize {
    let mut rows = m.to_vec();
    rref(&mut rows, p);
    rows.len()
}

/// Inverse of a square matrix over F_p, if invertible.
pub(crate) fn invert_matrix(m: &[Vec<u8>], p: u8) -> Option<Vec<Vec<u8>>> {
    let n = m.len();
    let mut aug: Vec<Vec<u8>> = (0..n)
        .map(|i| {
            let mut r = m[i].clone();
            r.extend((0..n).map(|j| u8::from(i == j)));
            r
        })
        .collect();
    let pivots = rref(&mut aug, p);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// All subspaces of F_p^n of dimension k, enumerated canonically via
/// reduced echelon forms. Count is the Gaussian binomial.
pub(crate) fn subspaces_of_dim(n: usize, k: usize, p: u8) -> Vec<FpSubspace> {
    if k > n {
        return vec![];
    }
    if k == 0 {
        return vec![FpSubspace::zero(n)];
    }
    let mut out = Vec::new();
    // Choose pivot columns, then free entries: an entry (i, j) is free when
    // j > pivot[i] and j is not a pivot column.
    let mut pivots = (0..k).collect::<Vec<usize>>();
    loop {
        let mut free_slots = Vec::new();
        for (i, &pi) in pivots.iter().enumerate() {
            for j in pi + 1..n {
                if !pivots.contains(&j) {
                    free_slots.push((i, j));
                }
            }
        }
        let total = (p as u64).pow(free_slots.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![0u8; n]; k];
            for (i, &pi) in pivots.iter().enumerate() {
                rows[i][pi] = 1;
            }
            for &(i, j) in &free_slots {
                rows[i][j] = (code % p as u64) as u8;
                code /= p as u64;
            }
            out.push(FpSubspace { n, rows });
        }
        // next combination of pivot columns
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] + (k - i) < n {
                pivots[i] += 1;
                for l in i + 1..k {
                    pivots[l] = pivots[l - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Gaussian binomial [n choose k]_p as u128 (for budget checks).
pub(crate) fn gaussian_binomial(n: usize, k: usize, p: u8) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (p as u128).pow((n - i) as u32) - 1;
        den *= (p as u128).pow((i + 1) as u32) - 1;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_kernel() {
        let m = vec![vec![1, 2, 0], vec![0, 0, 1]];
        let k = kernel_basis(&m, 3, 3);
        assert_eq!(k.len(), 1);
        // 1*v0 + 2*v1 = 0, v2 = 0 => v = (1, 1, 0) up to scale... check:
        let v = &k[0];
        assert_eq!((v[0] as u16 + 2 * v[1] as u16) % 3, 0);
        assert_eq!(v[2], 0);
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        assert_eq!(subspaces_of_dim(4, 2, 3).len() as u128, gaussian_binomial(4, 2, 3));
        assert_eq!(gaussian_binomial(4, 2, 3), 130);
        assert_eq!(subspaces_of_dim(3, 1, 3).len(), 13);
        assert_eq!(subspaces_of_dim(3, 2, 3).len(), 13);
        // Canonical forms are distinct.
        let all = subspaces_of_dim(4, 2, 3);
        let keys: std::collections::HashSet<_> = all.iter().map(|s| s.key()).collect();
        assert_eq!(keys.len(), all.len());
    }

    #[test]
    fn subspace_membership() {
        let s = FpSubspace::from_rows(3, vec![vec![1, 1, 0], vec![0, 0, 1]], 3);
        assert!(s.contains(&[2, 2, 1], 3));
        assert!(!s.contains(&[1, 0, 0], 3));
    }
}
