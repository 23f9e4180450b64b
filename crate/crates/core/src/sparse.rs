//! Compressed-row symmetric matrices and an envelope Cholesky factorization
//! under reverse Cuthill-McKee ordering.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Square sparse matrix in CSR layout with sorted column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Assembles from `(row, col, value)` triplets. Duplicates are summed in
    /// the order they appear, so the result is bitwise reproducible.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < n && c < n, "triplet ({r}, {c}) out of range for dimension {n}");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix { n, row_ptr, col_idx, values }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    /// `u^T A v`.
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        assert_eq!(u.len(), self.n);
        (0..self.n).map(|i| u[i] * self.row(i).map(|(j, a)| a * v[j]).sum::<f64>()).sum()
    }

    pub fn quad_form(&self, u: &[f64]) -> f64 {
        self.bilinear(u, u)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v).sum()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }

    /// Principal submatrix on `keep` (in the given order).
    pub fn principal_submatrix(&self, keep: &[usize]) -> CsrMatrix {
        let mut local = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            local[old] = new;
        }
        let mut triplets = Vec::new();
        for (new_row, &old_row) in keep.iter().enumerate() {
            for (j, v) in self.row(old_row) {
                if local[j] != usize::MAX {
                    triplets.push((new_row, local[j], v));
                }
            }
        }
        CsrMatrix::from_triplets(keep.len(), triplets)
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, other: &CsrMatrix, alpha: f64) -> CsrMatrix {
        assert_eq!(self.n, other.n);
        let mut triplets = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.n {
            triplets.extend(self.row(i).map(|(j, v)| (i, j, v)));
            triplets.extend(other.row(i).map(|(j, v)| (i, j, alpha * v)));
        }
        CsrMatrix::from_triplets(self.n, triplets)
    }

    pub fn scale(&self, alpha: f64) -> CsrMatrix {
        CsrMatrix { values: self.values.iter().map(|v| alpha * v).collect(), ..self.clone() }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d[(i, j)] = v;
            }
        }
        d
    }
}

/// Reverse Cuthill-McKee ordering of the matrix graph; `order[new] = old`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.dim();
    let neighbors: Vec<Vec<usize>> = (0..n).map(|i| a.row(i).map(|(j, _)| j).filter(|&j| j != i).collect()).collect();
    let degree: Vec<usize> = neighbors.iter().map(Vec::len).collect();

    let bfs_levels = |root: usize, allowed: &[bool]| -> Vec<Vec<usize>> {
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut levels = vec![vec![root]];
        loop {
            let mut next = Vec::new();
            for &v in levels.last().unwrap() {
                for &w in &neighbors[v] {
                    if allowed[w] && !seen[w] {
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                return levels;
            }
            levels.push(next);
        }
    };

    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let unplaced: Vec<bool> = placed.iter().map(|p| !p).collect();
        let mut root = (0..n).filter(|&v| !placed[v]).min_by_key(|&v| (degree[v], v)).unwrap();
        // Pseudo-peripheral root: hop to a low-degree vertex of the last BFS
        // level while the eccentricity keeps growing.
        let mut depth = bfs_levels(root, &unplaced).len();
        for _ in 0..8 {
            let levels = bfs_levels(root, &unplaced);
            let candidate = *levels.last().unwrap().iter().min_by_key(|&&v| (degree[v], v)).unwrap();
            let candidate_depth = bfs_levels(candidate, &unplaced).len();
            if candidate_depth <= depth {
                break;
            }
            root = candidate;
            depth = candidate_depth;
        }

        let mut queue = VecDeque::from([root]);
        placed[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = neighbors[v].iter().copied().filter(|&w| !placed[w]).collect();
            next.sort_by_key(|&w| (degree[w], w));
            for w in next {
                placed[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Cholesky factor `P A P^T = L L^T` stored by rows over each row's envelope.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    order: Vec<usize>,
    position: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.dim();
        let order = reverse_cuthill_mckee(a);
        let mut position = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }

        let mut first: Vec<usize> = (0..n).collect();
        for (new, &old) in order.iter().enumerate() {
            for (j, _) in a.row(old) {
                first[new] = first[new].min(position[j]);
            }
        }
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + (i - first[i] + 1));
        }
        let mut data = vec![0.0; start[n]];
        for (new, &old) in order.iter().enumerate() {
            for (j, v) in a.row(old) {
                let col = position[j];
                if col <= new {
                    data[start[new] + col - first[new]] = v;
                }
            }
        }

        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let k0 = fi.max(first[j]);
                let (head, tail) = data.split_at_mut(start[i]);
                let row_j = &head[start[j] + k0 - first[j]..start[j] + j - first[j]];
                let row_i = &tail[k0 - fi..j - fi];
                let dot: f64 = row_i.iter().zip(row_j).map(|(x, y)| x * y).sum();
                let diag_j = head[start[j + 1] - 1];
                tail[j - fi] = (tail[j - fi] - dot) / diag_j;
            }
            let row = &mut data[start[i]..start[i + 1]];
            let (off, diag) = row.split_at_mut(i - fi);
            let pivot = diag[0] - off.iter().map(|x| x * x).sum::<f64>();
            if !(pivot > 0.0) {
                return Err(Error::NotPositiveDefinite { row: order[i], pivot });
            }
            diag[0] = pivot.sqrt();
        }
        Ok(EnvelopeCholesky { order, position, first, start, data })
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Stored entries of the factor.
    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut y: Vec<f64> = self.order.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let fi = self.first[i];
            let dot: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] = (y[i] - dot) / row[i - fi];
        }
        for i in (0..n).rev() {
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let fi = self.first[i];
            y[i] /= row[i - fi];
            let xi = y[i];
            for (k, l) in (fi..i).zip(&row[..i - fi]) {
                y[k] -= l * xi;
            }
        }
        (0..n).map(|old| y[self.position[old]]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn laplacian_1d(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, t)
    }

    #[test]
    fn triplets_sum_duplicates() {
        let m = CsrMatrix::from_triplets(2, vec![(0, 0, 1.0), (1, 0, 2.0), (0, 0, 3.0), (0, 1, 2.0)]);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(0, 0), 4.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert!(m.is_symmetric());
        assert_eq!(m.mul_vec(&[1.0, 1.0]), vec![6.0, 2.0]);
        assert_eq!(m.row_sums(), vec![6.0, 2.0]);
    }

    #[test]
    fn rcm_is_a_permutation() {
        let m = laplacian_1d(10);
        let mut order = reverse_cuthill_mckee(&m);
        order.sort_unstable();
        assert_eq!(order, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn cholesky_solves_random_spd_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 40;
        // Random sparse SPD: graph Laplacian with random weights plus identity.
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 1.0));
            for _ in 0..3 {
                let j = rng.random_range(0..n);
                if j != i {
                    let w: f64 = rng.random_range(0.1..2.0);
                    t.extend([(i, i, w), (j, j, w), (i, j, -w), (j, i, -w)]);
                }
            }
        }
        let a = CsrMatrix::from_triplets(n, t);
        let x_true: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let b = a.mul_vec(&x_true);
        let x = EnvelopeCholesky::factor(&a).unwrap().solve(&b);
        let dense = a.to_dense().cholesky().unwrap().solve(&nalgebra::DVector::from_vec(b.clone()));
        for i in 0..n {
            assert!((x[i] - x_true[i]).abs() < 1e-10);
            assert!((x[i] - dense[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = laplacian_1d(5).add_scaled(&laplacian_1d(5), -1.0);
        assert!(matches!(EnvelopeCholesky::factor(&m), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn submatrix_and_scaling() {
        let m = laplacian_1d(4);
        let s = m.principal_submatrix(&[1, 2]);
        assert_eq!(s.to_dense(), DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]));
        assert_eq!(m.scale(2.0).get(0, 0), 4.0);
    }
}
