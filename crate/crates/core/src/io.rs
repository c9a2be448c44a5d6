//! JSON interchange for tensors and TCP instances.
//!
//! ```json
//! {"m": 3, "n": 2, "symmetric": false,
//!  "entries": [{"idx": [1, 1, 1], "v": 1.0}, {"idx": [2, 2, 2], "v": 1.0}]}
//! ```
//!
//! Indices are 1-based; unspecified entries are zero. A symmetric tensor's
//! entries are replicated onto every index permutation, and two entries that
//! land on the same position with different values are rejected. Symmetric
//! tensors are written with nondecreasing indices only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::Tensor;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Entry {
    idx: Vec<usize>,
    v: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TensorFile {
    m: usize,
    n: usize,
    #[serde(default)]
    symmetric: bool,
    #[serde(default)]
    entries: Vec<Entry>,
}

impl TensorFile {
    fn from_tensor(t: &Tensor) -> Self {
        let m = t.order();
        let mut idx = vec![0usize; m];
        let mut entries = Vec::new();
        for (flat, &v) in t.entries().iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            t.multi_index(flat, &mut idx);
            if t.is_symmetric() && idx.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            entries.push(Entry { idx: idx.iter().map(|i| i + 1).collect(), v });
        }
        TensorFile { m, n: t.dim(), symmetric: t.is_symmetric(), entries }
    }

    fn into_tensor(self) -> Result<Tensor> {
        let TensorFile { m, n, symmetric, entries } = self;
        let mut dense = Tensor::zeros(m, n)?.entries().to_vec();
        let mut set: Vec<Option<f64>> = vec![None; dense.len()];
        let perms = crate::tensor::permutations(m);
        let probe = Tensor::zeros(m, n)?;
        let mut permuted = vec![0usize; m];

        for e in entries {
            if e.idx.len() != m {
                return Err(Error::InvalidTensor(format!(
                    "index {:?} has {} components, expected {m}",
                    e.idx,
                    e.idx.len()
                )));
            }
            if e.idx.iter().any(|&i| i == 0 || i > n) {
                return Err(Error::InvalidTensor(format!("index {:?} outside 1..={n}", e.idx)));
            }
            if !e.v.is_finite() {
                return Err(Error::InvalidTensor(format!("entry at {:?} is not finite", e.idx)));
            }
            let zero_based: Vec<usize> = e.idx.iter().map(|i| i - 1).collect();
            let targets: Vec<usize> = if symmetric {
                let mut offs: Vec<usize> = perms
                    .iter()
                    .map(|p| {
                        for (k, &pk) in p.iter().enumerate() {
                            permuted[k] = zero_based[pk];
                        }
                        probe.offset(&permuted)
                    })
                    .collect();
                offs.sort_unstable();
                offs.dedup();
                offs
            } else {
                vec![probe.offset(&zero_based)]
            };
            for off in targets {
                match set[off] {
                    Some(prev) if prev != e.v => {
                        return Err(Error::InvalidTensor(format!(
                            "conflicting values {prev} and {} at {:?}",
                            e.v, e.idx
                        )))
                    }
                    _ => {
                        set[off] = Some(e.v);
                        dense[off] = e.v;
                    }
                }
            }
        }
        Tensor::new(m, n, dense, symmetric)
    }
}

impl Serialize for Tensor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorFile::from_tensor(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tensor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        TensorFile::deserialize(d)?.into_tensor().map_err(serde::de::Error::custom)
    }
}

pub fn tensor_from_json(s: &str) -> Result<Tensor> {
    TensorFile::into_tensor(serde_json::from_str(s)?)
}

pub fn tensor_to_json(t: &Tensor) -> String {
    serde_json::to_string(t).expect("tensor serialization is infallible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::unit_tensor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reads_sparse_file() {
        let t = tensor_from_json(
            r#"{"m":3,"n":2,"symmetric":false,"entries":[{"idx":[1,1,1],"v":1},{"idx":[2,2,2],"v":1}]}"#,
        )
        .unwrap();
        assert_eq!(t.entries(), unit_tensor(3, 2).unwrap().entries());
        assert!(!t.is_symmetric());
    }

    #[test]
    fn symmetric_entries_are_replicated() {
        let t = tensor_from_json(r#"{"m":2,"n":2,"symmetric":true,"entries":[{"idx":[1,2],"v":-1}]}"#).unwrap();
        assert_eq!(t.entries(), &[0.0, -1.0, -1.0, 0.0]);
        assert!(t.is_symmetric());
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            r#"{"m":2,"n":2,"symmetric":true,"entries":[{"idx":[1,2],"v":-1},{"idx":[2,1],"v":3}]}"#,
            r#"{"m":2,"n":2,"entries":[{"idx":[0,1],"v":1}]}"#,
            r#"{"m":2,"n":2,"entries":[{"idx":[1,3],"v":1}]}"#,
            r#"{"m":2,"n":2,"entries":[{"idx":[1],"v":1}]}"#,
            r#"{"m":1,"n":2,"entries":[]}"#,
            r#"{"m":2,"n":2,"entries":[{"idx":[1,1],"v":"x"}]}"#,
            r#"not json"#,
        ] {
            assert!(tensor_from_json(bad).is_err(), "{bad}");
        }
        // identical duplicates are fine
        assert!(tensor_from_json(
            r#"{"m":2,"n":2,"symmetric":true,"entries":[{"idx":[1,2],"v":2},{"idx":[2,1],"v":2}]}"#
        )
        .is_ok());
    }

    #[test]
    fn round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (m, n) in [(2usize, 3usize), (3, 2), (4, 3)] {
            let len = n.pow(m as u32);
            let a = Tensor::new(m, n, (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect(), false).unwrap();
            for t in [a.clone(), a.symmetrize()] {
                let back = tensor_from_json(&tensor_to_json(&t)).unwrap();
                assert_eq!(back, t);
            }
        }
    }
}
