//! Dense m-order n-dimensional real tensors and their multilinear contractions.
//!
//! Entries are stored row-major: the multi-index `(i1, ..., im)` (0-based)
//! lives at `sum_k i_k * n^(m-k)`. Indices are 0-based everywhere in the
//! library; the JSON interchange layer converts from 1-based exactly once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::norm2;

/// Relative tolerance for accepting a tensor as symmetric.
const SYMMETRY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    order: usize,
    dim: usize,
    entries: Vec<f64>,
    symmetric: bool,
}

impl Tensor {
    /// Builds a tensor from row-major entries. When `symmetric` is set the
    /// entries are checked for permutation invariance.
    pub fn new(order: usize, dim: usize, entries: Vec<f64>, symmetric: bool) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidTensor(format!("order m = {order} < 2")));
        }
        if dim < 1 {
            return Err(Error::InvalidTensor("dimension n = 0".into()));
        }
        let len = checked_len(order, dim)?;
        if entries.len() != len {
            return Err(Error::InvalidTensor(format!(
                "expected {len} entries for m = {order}, n = {dim}, got {}",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidTensor(format!("entry {pos} is not finite")));
        }
        let t = Tensor { order, dim, entries, symmetric: false };
        if symmetric {
            if !t.is_permutation_invariant() {
                return Err(Error::NotSymmetric);
            }
            let mut t = Tensor { symmetric: true, ..t };
            t.canonicalize_symmetric();
            return Ok(t);
        }
        Ok(t)
    }

    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        let len = checked_len(order, dim)?;
        Tensor::new(order, dim, vec![0.0; len], true)
    }

    /// `m x m` matrix from rows, as an order-2 tensor.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidTensor("matrix must be square".into()));
        }
        let entries: Vec<f64> = rows.iter().flatten().copied().collect();
        let sym = (0..n).all(|i| (0..n).all(|j| rows[i][j] == rows[j][i]));
        Tensor::new(2, n, entries, sym)
    }

    /// Diagonal tensor with `a_{i...i} = d_i`.
    pub fn diagonal(order: usize, d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut t = Tensor::zeros(order, n)?;
        for (i, &v) in d.iter().enumerate() {
            let k = t.diagonal_offset(i);
            t.entries[k] = v;
        }
        Tensor::new(order, n, t.entries, true)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.entries[self.offset(idx)]
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order);
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    /// Inverse of [`offset`](Self::offset).
    pub fn multi_index(&self, mut flat: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = flat % self.dim;
            flat /= self.dim;
        }
    }

    fn diagonal_offset(&self, i: usize) -> usize {
        (0..self.order).fold(0, |acc, _| acc * self.dim + i)
    }

    pub fn diagonal_entry(&self, i: usize) -> f64 {
        self.entries[self.diagonal_offset(i)]
    }

    pub fn diagonal_entries(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.diagonal_entry(i)).collect()
    }

    /// `row_i = sum_{i2..im} |a_{i i2 ... im}|`.
    pub fn abs_row_sums(&self) -> Vec<f64> {
        let block = self.entries.len() / self.dim;
        self.entries.chunks(block).map(|c| c.iter().map(|v| v.abs()).sum()).collect()
    }

    /// `sum_{i2..im} a_{k i2 ... im}`.
    pub fn row_sums(&self) -> Vec<f64> {
        let block = self.entries.len() / self.dim;
        self.entries.chunks(block).map(|c| c.iter().sum()).collect()
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    /// `(A x^{m-1})_i = sum a_{i i2...im} x_{i2} ... x_{im}`.
    pub fn contract_m1(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        Ok(self.contract_m1_unchecked(x))
    }

    /// [`contract_m1`](Self::contract_m1) for callers that already validated `x`.
    pub(crate) fn contract_m1_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let block = self.entries.len() / n;
        let mut cur = Vec::with_capacity(block);
        let mut next = Vec::with_capacity(block / n);
        self.entries
            .chunks(block)
            .map(|row| {
                // contract the trailing modes one at a time
                cur.clear();
                cur.extend_from_slice(row);
                for _ in 1..self.order {
                    next.clear();
                    next.extend(cur.chunks(n).map(|c| c.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()));
                    std::mem::swap(&mut cur, &mut next);
                }
                cur[0]
            })
            .collect()
    }

    /// `A x^m = x . (A x^{m-1})`.
    pub fn contract_full(&self, x: &[f64]) -> Result<f64> {
        let y = self.contract_m1(x)?;
        Ok(x.iter().zip(&y).map(|(a, b)| a * b).sum())
    }

    /// Jacobian `J_ij = d (A x^{m-1})_i / d x_j`, row-major `n x n`.
    pub fn jacobian_m1(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let m = self.order;
        let mut jac = vec![0.0; n * n];
        let mut idx = vec![0usize; m];
        let mut prefix = vec![1.0; m + 1];
        for (flat, &a) in self.entries.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            self.multi_index(flat, &mut idx);
            // prefix[k] = prod_{1 <= l < k} x_{i_l}, positions 1..m only
            prefix[1] = 1.0;
            for k in 1..m {
                prefix[k + 1] = prefix[k] * x[idx[k]];
            }
            let mut suffix = 1.0;
            for k in (1..m).rev() {
                jac[idx[0] * n + idx[k]] += a * prefix[k] * suffix;
                suffix *= x[idx[k]];
            }
        }
        jac
    }

    /// Principal sub-tensor on the index set `j`, reindexed by `j`'s order.
    pub fn principal_subtensor(&self, j: &IndexSet) -> Result<Tensor> {
        if let Some(&last) = j.indices().last() {
            if last >= self.dim {
                return Err(Error::InvalidIndexSet(format!("index {} out of range for n = {}", last + 1, self.dim)));
            }
        }
        let r = j.len();
        let m = self.order;
        let len = checked_len(m, r)?;
        let mut entries = Vec::with_capacity(len);
        let mut sub = vec![0usize; m];
        let mut full = vec![0usize; m];
        for flat in 0..len {
            let mut f = flat;
            for slot in sub.iter_mut().rev() {
                *slot = f % r;
                f /= r;
            }
            for (dst, &s) in full.iter_mut().zip(&sub) {
                *dst = j.indices()[s];
            }
            entries.push(self.get(&full));
        }
        Ok(Tensor { order: m, dim: r, entries, symmetric: self.symmetric })
    }

    /// Average over all permutations of index positions.
    pub fn symmetrize(&self) -> Tensor {
        let m = self.order;
        let perms = permutations(m);
        let mut idx = vec![0usize; m];
        let mut permuted = vec![0usize; m];
        let entries = (0..self.entries.len())
            .map(|flat| {
                self.multi_index(flat, &mut idx);
                let s: f64 = perms
                    .iter()
                    .map(|p| {
                        for (k, &pk) in p.iter().enumerate() {
                            permuted[k] = idx[pk];
                        }
                        self.get(&permuted)
                    })
                    .sum();
                s / perms.len() as f64
            })
            .collect();
        let mut t = Tensor { order: m, dim: self.dim, entries, symmetric: true };
        t.canonicalize_symmetric();
        t
    }

    /// Copies each sorted-index entry onto all its permutations, so symmetry
    /// holds bit for bit.
    fn canonicalize_symmetric(&mut self) {
        let mut idx = vec![0usize; self.order];
        for flat in 0..self.entries.len() {
            self.multi_index(flat, &mut idx);
            idx.sort_unstable();
            self.entries[flat] = self.entries[self.offset(&idx)];
        }
    }

    fn is_permutation_invariant(&self) -> bool {
        let scale = self.entries.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let m = self.order;
        let mut idx = vec![0usize; m];
        let mut sorted = vec![0usize; m];
        (0..self.entries.len()).all(|flat| {
            self.multi_index(flat, &mut idx);
            sorted.copy_from_slice(&idx);
            sorted.sort_unstable();
            (self.entries[flat] - self.get(&sorted)).abs() <= SYMMETRY_RTOL * scale
        })
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.order != other.order || self.dim != other.dim {
            return Err(Error::InvalidTensor("shape mismatch in addition".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Tensor { order: self.order, dim: self.dim, entries, symmetric: self.symmetric && other.symmetric })
    }

    pub fn scale(&self, t: f64) -> Tensor {
        Tensor { entries: self.entries.iter().map(|a| a * t).collect(), ..self.clone() }
    }

    /// Returns a copy with every diagonal entry replaced by `f(i, a_{i..i})`.
    pub fn map_diagonal(&self, f: impl Fn(usize, f64) -> f64) -> Tensor {
        let mut out = self.clone();
        for i in 0..self.dim {
            let k = self.diagonal_offset(i);
            out.entries[k] = f(i, self.entries[k]);
        }
        out
    }
}

fn checked_len(order: usize, dim: usize) -> Result<usize> {
    u32::try_from(order)
        .ok()
        .and_then(|m| dim.checked_pow(m))
        .filter(|&len| len <= 1 << 24)
        .ok_or_else(|| Error::InvalidTensor(format!("n^m too large for n = {dim}, m = {order}")))
}

pub(crate) fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Unit tensor `I` with `I x^{m-1} = x^{[m-1]}`.
pub fn unit_tensor(order: usize, dim: usize) -> Result<Tensor> {
    Tensor::diagonal(order, &vec![1.0; dim])
}

/// `E x^{m-1} = ||x||_2^{m-2} x`, valid for any order.
pub fn apply_e(order: usize, x: &[f64]) -> Vec<f64> {
    let k = order as i32 - 2;
    let s = if k % 2 == 0 { x.iter().map(|v| v * v).sum::<f64>().powi(k / 2) } else { norm2(x).powi(k) };
    x.iter().map(|v| v * s).collect()
}

/// Tensor realization of `E`: the symmetrization of the `m/2`-fold outer
/// product of the identity matrix. Requires even order.
pub fn e_tensor(order: usize, dim: usize) -> Result<Tensor> {
    if !order.is_multiple_of(2) {
        return Err(Error::OddOrder(order));
    }
    let len = checked_len(order, dim)?;
    let mut raw = Tensor { order, dim, entries: vec![0.0; len], symmetric: false };
    let mut idx = vec![0usize; order];
    for flat in 0..len {
        raw.multi_index(flat, &mut idx);
        if idx.chunks(2).all(|p| p[0] == p[1]) {
            raw.entries[flat] = 1.0;
        }
    }
    Ok(raw.symmetrize())
}

/// Strictly increasing, nonempty subset of `{0, ..., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidIndexSet("empty index set".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndexSet(format!("indices must be strictly increasing: {indices:?}")));
        }
        Ok(IndexSet(indices))
    }

    pub fn full(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    pub fn singleton(i: usize) -> Self {
        IndexSet(vec![i])
    }

    /// Support set from a bitmask over `{0, ..., n-1}`; `None` for mask 0.
    pub fn from_mask(mask: u64, n: usize) -> Option<Self> {
        let v: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        (!v.is_empty()).then_some(IndexSet(v))
    }

    /// All nonempty subsets ordered by size, then lexicographically.
    pub fn all_nonempty(n: usize) -> Vec<IndexSet> {
        let mut sets: Vec<IndexSet> = (1u64..(1u64 << n)).filter_map(|m| Self::from_mask(m, n)).collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.0.cmp(&b.0)));
        sets
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn restrict(&self, x: &[f64]) -> Vec<f64> {
        self.0.iter().map(|&i| x[i]).collect()
    }

    /// Zero-extension of `y` (indexed by this set) to length `n`.
    pub fn embed(&self, y: &[f64], n: usize) -> Vec<f64> {
        let mut x = vec![0.0; n];
        for (&i, &v) in self.0.iter().zip(y) {
            x[i] = v;
        }
        x
    }
}

// 1-based on the wire.
impl Serialize for IndexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|i| i + 1))
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        if raw.contains(&0) {
            return Err(serde::de::Error::custom("index sets are 1-based"));
        }
        IndexSet::new(raw.into_iter().map(|i| i - 1).collect()).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tensor(m: usize, n: usize, rng: &mut impl Rng) -> Tensor {
        let len = n.pow(m as u32);
        Tensor::new(m, n, (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect(), false).unwrap()
    }

    /// Triple-loop oracle for m = 3.
    fn naive_m3(a: &Tensor, x: &[f64]) -> Vec<f64> {
        let n = a.dim();
        (0..n)
            .map(|i| {
                let mut s = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        s += a.get(&[i, j, k]) * x[j] * x[k];
                    }
                }
                s
            })
            .collect()
    }

    #[test]
    fn matrix_vector_product() {
        let a = Tensor::from_matrix(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(a.contract_m1(&[1.0, 1.0]).unwrap(), vec![3.0, 7.0]);
    }

    #[test]
    fn unit_tensor_gives_componentwise_power() {
        let i = unit_tensor(3, 2).unwrap();
        assert_eq!(i.contract_m1(&[2.0, 3.0]).unwrap(), vec![4.0, 9.0]);
        let i4 = unit_tensor(4, 2).unwrap();
        assert_eq!(i4.contract_full(&[1.0, 1.0]).unwrap(), 2.0);
    }

    #[test]
    fn contraction_matches_triple_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_tensor(3, 3, &mut rng);
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let got = a.contract_m1(&x).unwrap();
            for (g, e) in got.iter().zip(naive_m3(&a, &x)) {
                assert!((g - e).abs() <= 1e-12, "{g} vs {e}");
            }
            let full = a.contract_full(&x).unwrap();
            let dot: f64 = x.iter().zip(&got).map(|(a, b)| a * b).sum();
            assert!((full - dot).abs() <= 1e-12);
        }
    }

    #[test]
    fn one_dimensional_contraction() {
        let a = Tensor::new(4, 1, vec![3.0], false).unwrap();
        assert_eq!(a.contract_m1(&[2.0]).unwrap(), vec![24.0]);
        assert_eq!(a.jacobian_m1(&[2.0]), vec![36.0]);
    }

    #[test]
    fn contract_full_of_zero_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_tensor(4, 3, &mut rng);
        assert_eq!(a.contract_full(&[0.0; 3]).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = unit_tensor(3, 2).unwrap();
        assert_eq!(a.contract_m1(&[1.0, 2.0, 3.0]), Err(Error::DimensionMismatch { expected: 2, got: 3 }));
        assert!(a.contract_full(&[1.0]).is_err());
    }

    #[test]
    fn construction_validation() {
        assert!(Tensor::new(1, 2, vec![0.0; 2], false).is_err());
        assert!(Tensor::new(2, 2, vec![0.0; 3], false).is_err());
        assert!(Tensor::new(2, 2, vec![0.0, f64::NAN, 0.0, 0.0], false).is_err());
        assert_eq!(Tensor::new(2, 2, vec![0.0, 1.0, 2.0, 0.0], true), Err(Error::NotSymmetric));
    }

    #[test]
    fn principal_subtensor_cases() {
        let a = Tensor::from_matrix(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let s = a.principal_subtensor(&IndexSet::singleton(1)).unwrap();
        assert_eq!(s.entries(), &[4.0]);
        assert_eq!(a.principal_subtensor(&IndexSet::full(2)).unwrap(), a);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = random_tensor(3, 3, &mut rng);
        for i in 0..3 {
            let s = b.principal_subtensor(&IndexSet::singleton(i)).unwrap();
            assert_eq!(s.entries(), &[b.get(&[i, i, i])]);
        }
        assert!(b.principal_subtensor(&IndexSet::new(vec![0, 3]).unwrap()).is_err());
        assert!(IndexSet::new(vec![]).is_err());
        assert!(IndexSet::new(vec![2, 1]).is_err());
    }

    #[test]
    fn e_operator() {
        assert_eq!(apply_e(4, &[1.0, 1.0]), vec![2.0, 2.0]);
        assert_eq!(apply_e(2, &[3.0, -1.5]), vec![3.0, -1.5]);
        let e = e_tensor(4, 3).unwrap();
        let x = [0.3, -1.2, 2.0];
        for (a, b) in e.contract_m1(&x).unwrap().iter().zip(apply_e(4, &x)) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(e_tensor(3, 2), Err(Error::OddOrder(3)));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for m in 2..=4 {
            let a = random_tensor(m, 3, &mut rng);
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let jac = a.jacobian_m1(&x);
            let h = 1e-6;
            for j in 0..3 {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                let fp = a.contract_m1(&xp).unwrap();
                let fm = a.contract_m1(&xm).unwrap();
                for i in 0..3 {
                    let fd = (fp[i] - fm[i]) / (2.0 * h);
                    assert!((jac[i * 3 + j] - fd).abs() < 1e-7, "m={m} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn index_set_wire_format_is_one_based() {
        let j = IndexSet::new(vec![0, 2]).unwrap();
        assert_eq!(serde_json::to_string(&j).unwrap(), "[1,3]");
        let back: IndexSet = serde_json::from_str("[1,3]").unwrap();
        assert_eq!(back, j);
        assert!(serde_json::from_str::<IndexSet>("[0,1]").is_err());
    }

    #[test]
    fn all_nonempty_enumerates_every_support() {
        let sets = IndexSet::all_nonempty(3);
        assert_eq!(sets.len(), 7);
        assert_eq!(sets[0].indices(), &[0]);
        assert_eq!(sets[6].indices(), &[0, 1, 2]);
    }
}
