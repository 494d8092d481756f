//! Seeded i.i.d. bounded data streams.
//!
//! Samples are produced by a counter-based generator: the point at index
//! `(trajectory, step, batch_index)` is a pure function of the seed and that
//! index, so trajectories can be run on any number of workers in any order
//! without changing a single sample.
//!
//! # Generator
//!
//! Philox4x32-10 (Salmon et al., Random123), keyed by the 64-bit seed
//! `key = [seed & 0xffff_ffff, seed >> 32]`. The 128-bit counter for
//! coordinate block `b` of sample `(t, n, m)` is `[b, m, n, t]` (all `u32`).
//! One block yields four words `w0..w3` and two uniforms on `[0, 1)`:
//!
//! ```text
//! u_lo = (((w1 << 32) | w0) >> 11) * 2^-53      // coordinate 2b
//! u_hi = (((w3 << 32) | w2) >> 11) * 2^-53      // coordinate 2b + 1
//! ```
//!
//! Distributions consume uniforms as follows:
//!
//! * uniform box: `x_j = p_box * (2 u_j - 1)`;
//! * symmetric two-point: `u_0 < 1/2` selects the corner `-p_box·1`,
//!   otherwise `+p_box·1`;
//! * finite atoms: the first atom whose cumulative probability exceeds `u_0`;
//! * point mass: no uniforms are drawn.
//!
//! Known-answer vectors for the raw generator are in the unit tests below.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PHILOX_M0: u32 = 0xD251_1F53;
const PHILOX_M1: u32 = 0xCD9E_8D57;
const PHILOX_W0: u32 = 0x9E37_79B9;
const PHILOX_W1: u32 = 0xBB67_AE85;

#[inline]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let p = (a as u64) * (b as u64);
    ((p >> 32) as u32, p as u32)
}

/// Philox4x32 with 10 rounds.
#[inline]
pub fn philox4x32_10(counter: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let mut ctr = counter;
    let mut k = key;
    for round in 0..10 {
        if round > 0 {
            k[0] = k[0].wrapping_add(PHILOX_W0);
            k[1] = k[1].wrapping_add(PHILOX_W1);
        }
        let (hi0, lo0) = mulhilo(PHILOX_M0, ctr[0]);
        let (hi1, lo1) = mulhilo(PHILOX_M1, ctr[2]);
        ctr = [hi1 ^ ctr[1] ^ k[0], lo1, hi0 ^ ctr[3] ^ k[1], lo0];
    }
    ctr
}

#[inline]
fn words_to_unit(lo: u32, hi: u32) -> f64 {
    let bits = (((hi as u64) << 32) | lo as u64) >> 11;
    bits as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Distribution of a single raw data point on the box `[-p_box, p_box]^dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distribution {
    UniformBox,
    SymmetricTwoPoint,
    FiniteAtoms {
        atoms: Vec<Vec<f64>>,
        probabilities: Vec<f64>,
    },
    PointMass {
        atom: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSpec {
    pub dim_data: usize,
    pub p_box: f64,
    pub distribution: Distribution,
    pub seed: u64,
}

impl DataSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dim_data == 0 {
            return Err(Error::input("data dimension must be positive"));
        }
        if !(self.p_box.is_finite() && self.p_box > 0.0) {
            return Err(Error::domain(format!("box radius must be positive, got {}", self.p_box)));
        }
        let check_atom = |a: &[f64]| -> Result<()> {
            if a.len() != self.dim_data {
                return Err(Error::input(format!(
                    "atom has dimension {}, expected {}",
                    a.len(),
                    self.dim_data
                )));
            }
            if a.iter().any(|x| !x.is_finite() || x.abs() > self.p_box) {
                return Err(Error::domain("atom lies outside the data box"));
            }
            Ok(())
        };
        match &self.distribution {
            Distribution::UniformBox | Distribution::SymmetricTwoPoint => Ok(()),
            Distribution::PointMass { atom } => check_atom(atom),
            Distribution::FiniteAtoms {
                atoms,
                probabilities,
            } => {
                if atoms.is_empty() {
                    return Err(Error::input("empty data support"));
                }
                if atoms.len() != probabilities.len() {
                    return Err(Error::input("atom and probability lists differ in length"));
                }
                for a in atoms {
                    check_atom(a)?;
                }
                if probabilities.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
                    return Err(Error::domain("atom probabilities must be nonnegative"));
                }
                let total: f64 = probabilities.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::domain(format!(
                        "atom probabilities sum to {total}, expected 1"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Weighted nodes used to evaluate expectations over the data law.
    ///
    /// Finite distributions are exact. The uniform box uses the tensor
    /// midpoint grid with `k = max(2, floor(100000^(1/dim)))` nodes per axis,
    /// node `i` at `p_box * (-1 + (2i + 1) / k)`, equal weights.
    pub fn expectation_nodes(&self) -> Vec<(Vec<f64>, f64)> {
        let p = self.p_box;
        let dim = self.dim_data;
        match &self.distribution {
            Distribution::PointMass { atom } => vec![(atom.clone(), 1.0)],
            Distribution::SymmetricTwoPoint => vec![(vec![-p; dim], 0.5), (vec![p; dim], 0.5)],
            Distribution::FiniteAtoms {
                atoms,
                probabilities,
            } => atoms.iter().cloned().zip(probabilities.iter().copied()).collect(),
            Distribution::UniformBox => {
                let k = ((QUADRATURE_NODES as f64).powf(1.0 / dim as f64).floor() as usize).max(2);
                let axis: Vec<f64> = (0..k)
                    .map(|i| p * (-1.0 + (2 * i + 1) as f64 / k as f64))
                    .collect();
                let total = k.pow(dim as u32);
                let w = 1.0 / total as f64;
                let mut out = Vec::with_capacity(total);
                let mut idx = vec![0usize; dim];
                for _ in 0..total {
                    out.push((idx.iter().map(|&i| axis[i]).collect(), w));
                    for slot in idx.iter_mut() {
                        *slot += 1;
                        if *slot < k {
                            break;
                        }
                        *slot = 0;
                    }
                }
                out
            }
        }
    }
}

/// Target node count of the uniform-box quadrature grid.
pub const QUADRATURE_NODES: usize = 100_000;

/// Stateless sampler over a [`DataSpec`].
#[derive(Debug, Clone)]
pub struct SampleStream {
    spec: DataSpec,
    key: [u32; 2],
    cumulative: Vec<f64>,
}

impl SampleStream {
    pub fn new(spec: DataSpec) -> Result<Self> {
        spec.validate()?;
        let key = [spec.seed as u32, (spec.seed >> 32) as u32];
        let cumulative = match &spec.distribution {
            Distribution::FiniteAtoms { probabilities, .. } => {
                let mut acc = 0.0;
                let mut c: Vec<f64> = probabilities
                    .iter()
                    .map(|p| {
                        acc += p;
                        acc
                    })
                    .collect();
                if let Some(last) = c.last_mut() {
                    *last = f64::INFINITY;
                }
                c
            }
            _ => Vec::new(),
        };
        Ok(SampleStream {
            spec,
            key,
            cumulative,
        })
    }

    pub fn spec(&self) -> &DataSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim_data
    }

    #[inline]
    fn uniform_pair(&self, block: u32, t: u32, n: u32, m: u32) -> (f64, f64) {
        let w = philox4x32_10([block, m, n, t], self.key);
        (words_to_unit(w[0], w[1]), words_to_unit(w[2], w[3]))
    }

    /// Uniform on `[0, 1)` for coordinate `j` of sample `(t, n, m)`.
    pub fn uniform(&self, t: u32, n: u32, m: u32, j: usize) -> f64 {
        let (lo, hi) = self.uniform_pair((j / 2) as u32, t, n, m);
        if j % 2 == 0 {
            lo
        } else {
            hi
        }
    }

    /// Writes sample `(t, n, m)` into `out` (length `dim_data`).
    #[inline]
    pub fn sample_into(&self, t: u32, n: u32, m: u32, out: &mut [f64]) {
        let p = self.spec.p_box;
        match &self.spec.distribution {
            Distribution::UniformBox => {
                for (b, chunk) in out.chunks_mut(2).enumerate() {
                    let (lo, hi) = self.uniform_pair(b as u32, t, n, m);
                    chunk[0] = p * (2.0 * lo - 1.0);
                    if chunk.len() > 1 {
                        chunk[1] = p * (2.0 * hi - 1.0);
                    }
                }
            }
            Distribution::SymmetricTwoPoint => {
                let (u, _) = self.uniform_pair(0, t, n, m);
                let v = if u < 0.5 { -p } else { p };
                out.fill(v);
            }
            Distribution::FiniteAtoms { atoms, .. } => {
                let (u, _) = self.uniform_pair(0, t, n, m);
                let k = self.cumulative.iter().position(|&c| u < c).unwrap_or(atoms.len() - 1);
                out.copy_from_slice(&atoms[k]);
            }
            Distribution::PointMass { atom } => out.copy_from_slice(atom),
        }
    }

    /// The `batch` points used at step `n` of trajectory `trajectory`.
    pub fn sample_batch(&self, trajectory: u32, n: u32, batch: usize) -> Vec<Vec<f64>> {
        (0..batch)
            .map(|m| {
                let mut x = vec![0.0; self.dim()];
                self.sample_into(trajectory, n, m as u32, &mut x);
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Known-answer vectors published with Random123.
    #[test]
    fn philox_known_answers() {
        assert_eq!(
            philox4x32_10([0, 0, 0, 0], [0, 0]),
            [0x6627_e8d5, 0xe169_c58d, 0xbc57_ac4c, 0x9b00_dbd8]
        );
        assert_eq!(
            philox4x32_10([u32::MAX; 4], [u32::MAX; 2]),
            [0x408f_276d, 0x41c8_3b0e, 0xa20b_c7c6, 0x6d54_51fd]
        );
        assert_eq!(
            philox4x32_10(
                [0x243f_6a88, 0x85a3_08d3, 0x1319_8a2e, 0x0370_7344],
                [0xa409_3822, 0x299f_31d0]
            ),
            [0xd16c_fe09, 0x94fd_cceb, 0x5001_e420, 0x2412_6ea1]
        );
    }

    #[test]
    fn unit_conversion_bounds() {
        assert_eq!(words_to_unit(0, 0), 0.0);
        let top = words_to_unit(u32::MAX, u32::MAX);
        assert!(top < 1.0 && top > 1.0 - 1e-15);
    }

    fn uniform_spec(dim: usize, seed: u64) -> DataSpec {
        DataSpec {
            dim_data: dim,
            p_box: 1.0,
            distribution: Distribution::UniformBox,
            seed,
        }
    }

    #[test]
    fn point_mass_is_constant() {
        let s = SampleStream::new(DataSpec {
            dim_data: 2,
            p_box: 1.0,
            distribution: Distribution::PointMass {
                atom: vec![0.25, -0.5],
            },
            seed: 3,
        })
        .unwrap();
        for x in s.sample_batch(7, 11, 5) {
            assert_eq!(x, vec![0.25, -0.5]);
        }
    }

    #[test]
    fn batches_are_reproducible_and_order_free() {
        let s = SampleStream::new(uniform_spec(3, 99)).unwrap();
        let a = s.sample_batch(1, 5, 4);
        let _ = s.sample_batch(1, 6, 4);
        let b = s.sample_batch(1, 5, 4);
        assert_eq!(a, b);
        let mut single = vec![0.0; 3];
        s.sample_into(1, 5, 2, &mut single);
        assert_eq!(single, a[2]);
        assert_ne!(s.sample_batch(2, 5, 4), a);
    }

    #[test]
    fn uniform_mean_and_second_moment() {
        let s = SampleStream::new(uniform_spec(1, 2024)).unwrap();
        let n = 1_000_000u32;
        let mut x = [0.0];
        let (mut sum, mut sq) = (0.0, 0.0);
        for i in 0..n {
            s.sample_into(0, i, 0, &mut x);
            assert!(x[0].abs() <= 1.0);
            sum += x[0];
            sq += x[0] * x[0];
        }
        let mean = sum / n as f64;
        let second = sq / n as f64;
        assert!(mean.abs() <= 0.004, "mean {mean}");
        assert!((second - 1.0 / 3.0).abs() <= 0.01 / 3.0, "second moment {second}");
    }

    #[test]
    fn atoms_follow_probabilities() {
        let s = SampleStream::new(DataSpec {
            dim_data: 1,
            p_box: 1.0,
            distribution: Distribution::FiniteAtoms {
                atoms: vec![vec![-1.0], vec![0.0], vec![1.0]],
                probabilities: vec![0.2, 0.3, 0.5],
            },
            seed: 5,
        })
        .unwrap();
        let mut counts = [0usize; 3];
        let mut x = [0.0];
        for i in 0..100_000 {
            s.sample_into(0, i, 0, &mut x);
            counts[(x[0] + 1.0) as usize] += 1;
        }
        let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / 100_000.0).collect();
        assert!((freq[0] - 0.2).abs() < 0.01);
        assert!((freq[1] - 0.3).abs() < 0.01);
        assert!((freq[2] - 0.5).abs() < 0.01);
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut spec = uniform_spec(1, 0);
        spec.p_box = 0.0;
        assert!(spec.validate().is_err());
        let spec = DataSpec {
            dim_data: 1,
            p_box: 1.0,
            distribution: Distribution::FiniteAtoms {
                atoms: vec![vec![0.0], vec![1.0]],
                probabilities: vec![0.5, 0.6],
            },
            seed: 0,
        };
        assert!(spec.validate().is_err());
        let spec = DataSpec {
            dim_data: 1,
            p_box: 1.0,
            distribution: Distribution::PointMass { atom: vec![1.5] },
            seed: 0,
        };
        assert!(spec.validate().is_err());
        let spec = DataSpec {
            dim_data: 1,
            p_box: 1.0,
            distribution: Distribution::FiniteAtoms {
                atoms: vec![],
                probabilities: vec![],
            },
            seed: 0,
        };
        assert!(matches!(spec.validate(), Err(Error::Input(_))));
    }

    #[test]
    fn quadrature_grid_is_symmetric() {
        let nodes = uniform_spec(2, 0).expectation_nodes();
        assert_eq!(nodes.len(), 316 * 316);
        let total: f64 = nodes.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-9);
        let mean0: f64 = nodes.iter().map(|(x, w)| x[0] * w).sum();
        assert!(mean0.abs() < 1e-12);
        assert!(nodes.iter().all(|(x, _)| x.iter().all(|v| v.abs() < 1.0)));
    }
}
