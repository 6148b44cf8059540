//! Dense truncated signatures.
//!
//! Level `k` of a [`TruncSig`] over `R^d` holds the `d^k` iterated integrals
//! indexed by words `(i_1, ..., i_k)` in row-major order, `i_1` slowest.
//! Level 0 is the constant 1.

use std::io::{Read, Write};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::path::{PathModel, PiecewiseLinearPath, SampledPath};
use crate::words::{TensorElem, Word};

/// Segments per block in the blocked Chen fold of [`sig_pl`].
pub const CHEN_BLOCK: usize = 512;

const BINARY_MAGIC: &[u8; 4] = b"SIGC";
const BINARY_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncSig {
    dim: usize,
    depth: usize,
    levels: Vec<Vec<f64>>,
}

/// How the signature of a sampled path is approximated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignatureMethod {
    /// Signature of the polyline through the samples.
    #[default]
    Chordal,
    /// `(4 S_h - S_2h) / 3` from the polylines through all samples and
    /// through every other sample; cancels the leading `h^2` error.
    Richardson,
}

impl TruncSig {
    /// The signature of a constant path: `(1, 0, 0, ...)`.
    pub fn trivial(dim: usize, depth: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        let levels = (0..=depth)
            .map(|k| {
                let mut level = vec![0.0; dim.pow(k as u32)];
                if k == 0 {
                    level[0] = 1.0;
                }
                level
            })
            .collect();
        TruncSig { dim, depth, levels }
    }

    pub fn from_levels(dim: usize, levels: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 || levels.is_empty() {
            return Err(Error::usage("a signature needs a dimension and level 0"));
        }
        for (k, level) in levels.iter().enumerate() {
            if level.len() != dim.pow(k as u32) {
                return Err(Error::usage(format!(
                    "level {k} has {} entries, expected {}",
                    level.len(),
                    dim.pow(k as u32)
                )));
            }
        }
        if levels[0][0] != 1.0 {
            return Err(Error::domain("level 0 must equal 1"));
        }
        Ok(TruncSig {
            dim,
            depth: levels.len() - 1,
            levels,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Truncation level `K`.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn level(&self, k: usize) -> &[f64] {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    /// The entry indexed by `word`.
    pub fn entry(&self, word: &Word) -> Result<f64> {
        if word.alphabet() != self.dim {
            return Err(Error::usage(format!(
                "word over {} letters paired with a signature in dimension {}",
                word.alphabet(),
                self.dim
            )));
        }
        if word.len() > self.depth {
            return Err(Error::Truncation {
                len: word.len(),
                depth: self.depth,
            });
        }
        Ok(self.levels[word.len()][word.flat_index()])
    }

    /// Largest absolute entry of level `k`.
    pub fn level_max_abs(&self, k: usize) -> f64 {
        self.levels[k].iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn truncate(&self, depth: usize) -> Result<TruncSig> {
        if depth > self.depth {
            return Err(Error::Truncation {
                len: depth,
                depth: self.depth,
            });
        }
        Ok(TruncSig {
            dim: self.dim,
            depth,
            levels: self.levels[..=depth].to_vec(),
        })
    }

    /// Largest entrywise difference over the common levels.
    pub fn max_abs_diff(&self, other: &TruncSig) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.levels
            .iter()
            .zip(&other.levels)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    pub fn to_json_string(&self) -> String {
        let dump = SigJson {
            d: self.dim,
            k: self.depth,
            levels: self.levels.clone(),
        };
        serde_json::to_string(&dump).expect("plain data serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let dump: SigJson =
            serde_json::from_str(text).map_err(|e| ParseError::general(e.to_string()))?;
        let sig = Self::from_levels(dump.d, dump.levels)?;
        if sig.depth != dump.k {
            return Err(Error::usage(format!(
                "declared K = {} but {} levels present",
                dump.k,
                sig.depth + 1
            )));
        }
        Ok(sig)
    }

    /// Little-endian dump: magic `SIGC`, version, `d`, `K` as `u32`, then
    /// every level's entries as `f64` in row-major order.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(BINARY_MAGIC)?;
        for v in [BINARY_VERSION, self.dim as u32, self.depth as u32] {
            w.write_all(&v.to_le_bytes())?;
        }
        for x in self.levels.iter().flatten() {
            w.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != BINARY_MAGIC {
            return Err(ParseError::general("not a binary signature dump").into());
        }
        let mut word = [0u8; 4];
        let mut next_u32 = |r: &mut R| -> Result<u32> {
            r.read_exact(&mut word)?;
            Ok(u32::from_le_bytes(word))
        };
        let version = next_u32(&mut r)?;
        if version != BINARY_VERSION {
            return Err(ParseError::general(format!("unsupported version {version}")).into());
        }
        let dim = next_u32(&mut r)? as usize;
        let depth = next_u32(&mut r)? as usize;
        let mut levels = Vec::with_capacity(depth + 1);
        let mut buf = [0u8; 8];
        for k in 0..=depth {
            let mut level = Vec::with_capacity(dim.pow(k as u32));
            for _ in 0..dim.pow(k as u32) {
                r.read_exact(&mut buf)?;
                level.push(f64::from_le_bytes(buf));
            }
            levels.push(level);
        }
        Self::from_levels(dim, levels)
    }
}

#[derive(Serialize, Deserialize)]
struct SigJson {
    d: usize,
    #[serde(rename = "K")]
    k: usize,
    levels: Vec<Vec<f64>>,
}

/// Signature of the straight segment with displacement `v`: level `k` is
/// `v^{⊗k} / k!`.
pub fn segment_sig(v: &[f64], depth: usize) -> TruncSig {
    let mut sig = TruncSig::trivial(v.len(), depth);
    for k in 1..=depth {
        let (lower, upper) = sig.levels.split_at_mut(k);
        let prev = &lower[k - 1];
        let cur = &mut upper[0];
        let inv_k = 1.0 / k as f64;
        for (i, &p) in prev.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                cur[i * v.len() + j] = p * vj * inv_k;
            }
        }
    }
    sig
}

/// Chen product truncated at `depth`: level `k` is `Σ_{i+j=k} A_i ⊗ B_j`.
pub fn chen_mul(a: &TruncSig, b: &TruncSig, depth: usize) -> Result<TruncSig> {
    if a.dim != b.dim {
        return Err(Error::usage(format!(
            "dimension mismatch: {} vs {}",
            a.dim, b.dim
        )));
    }
    if a.depth < depth || b.depth < depth {
        return Err(Error::Truncation {
            len: depth,
            depth: a.depth.min(b.depth),
        });
    }
    let d = a.dim;
    let mut out = TruncSig::trivial(d, depth);
    for k in 1..=depth {
        let level = &mut out.levels[k];
        for i in 0..=k {
            let (ai, bj) = (&a.levels[i], &b.levels[k - i]);
            let stride = bj.len();
            for (x, &av) in ai.iter().enumerate() {
                if av == 0.0 {
                    continue;
                }
                let row = &mut level[x * stride..(x + 1) * stride];
                for (slot, &bv) in row.iter_mut().zip(bj) {
                    *slot += av * bv;
                }
            }
        }
    }
    Ok(out)
}

/// `S <- S ⊗ exp(v)` in place, by Horner's scheme on each level.
fn mul_segment_in_place(sig: &mut TruncSig, v: &[f64], scratch: &mut Vec<f64>) {
    let d = sig.dim;
    for k in (1..=sig.depth).rev() {
        // T_0 = S_0; T_m = S_m + T_{m-1} ⊗ v / (k - m + 1); level k <- T_k.
        scratch.clear();
        scratch.extend_from_slice(&sig.levels[0]);
        for m in 1..=k {
            let c = 1.0 / (k - m + 1) as f64;
            let src = &sig.levels[m];
            let mut next = Vec::with_capacity(src.len());
            for (x, &t) in scratch.iter().enumerate() {
                let tc = t * c;
                for (j, &vj) in v.iter().enumerate() {
                    next.push(src[x * d + j] + tc * vj);
                }
            }
            *scratch = next;
        }
        sig.levels[k].copy_from_slice(scratch);
    }
}

fn fold_increments(dim: usize, increments: &[Vec<f64>], depth: usize) -> TruncSig {
    let mut sig = TruncSig::trivial(dim, depth);
    let mut scratch = Vec::new();
    for v in increments {
        if v.iter().all(|&x| x == 0.0) {
            continue;
        }
        mul_segment_in_place(&mut sig, v, &mut scratch);
    }
    sig
}

/// Exact signature of a piecewise-linear path.
///
/// Segments are grouped in consecutive blocks of [`CHEN_BLOCK`]; blocks are
/// folded independently (in parallel) and then combined left to right, so
/// the result does not depend on the thread count.
pub fn sig_pl(x: &PiecewiseLinearPath, depth: usize) -> TruncSig {
    sig_of_increments(x.dim(), &x.increments(), depth)
}

fn sig_of_increments(dim: usize, increments: &[Vec<f64>], depth: usize) -> TruncSig {
    if increments.len() <= CHEN_BLOCK {
        return fold_increments(dim, increments, depth);
    }
    let blocks: Vec<TruncSig> = increments
        .par_chunks(CHEN_BLOCK)
        .map(|chunk| fold_increments(dim, chunk, depth))
        .collect();
    blocks.iter().skip(1).fold(blocks[0].clone(), |acc, b| {
        chen_mul(&acc, b, depth).expect("same shape")
    })
}

fn sample_increments(x: &SampledPath) -> Vec<Vec<f64>> {
    x.values()
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect())
        .collect()
}

/// Signature of the polyline through the samples.
pub fn sig_sampled(x: &SampledPath, depth: usize) -> TruncSig {
    sig_of_increments(x.dim(), &sample_increments(x), depth)
}

/// Richardson-extrapolated chordal signature; falls back to the chordal
/// signature when there are fewer than two intervals.
pub fn sig_richardson(x: &SampledPath, depth: usize) -> TruncSig {
    let fine = sig_sampled(x, depth);
    if x.len() < 3 {
        return fine;
    }
    let coarse = sig_sampled(&x.subsample(2), depth);
    let levels = fine
        .levels
        .iter()
        .zip(&coarse.levels)
        .enumerate()
        .map(|(k, (f, c))| {
            if k == 0 {
                vec![1.0]
            } else {
                f.iter().zip(c).map(|(a, b)| (4.0 * a - b) / 3.0).collect()
            }
        })
        .collect();
    TruncSig {
        dim: fine.dim,
        depth,
        levels,
    }
}

/// Signature of any path model. Piecewise-linear paths are always exact;
/// `method` selects the approximation for sampled paths.
pub fn signature(x: &PathModel, depth: usize, method: SignatureMethod) -> TruncSig {
    match (x, method) {
        (PathModel::PiecewiseLinear(p), _) => sig_pl(p, depth),
        (PathModel::Sampled(s), SignatureMethod::Chordal) => sig_sampled(s, depth),
        (PathModel::Sampled(s), SignatureMethod::Richardson) => sig_richardson(s, depth),
    }
}

/// Oracle signature: integrates `S' = S ⊗ Ẋ` with the classical fourth-order
/// Runge-Kutta method, where `Ẋ` is the slope of the sample interval
/// containing the current time.
///
/// `substeps` uniform steps cover `[a, b]`; steps are further split at the
/// sample times so that `Ẋ` is constant within each step.
pub fn sig_ode_oracle(x: &SampledPath, depth: usize, substeps: usize) -> TruncSig {
    let substeps = substeps.max(1);
    let (a, b) = x.domain();
    let times = x.times();
    let values = x.values();
    let dim = x.dim();
    let mut breaks: Vec<f64> = (0..=substeps)
        .map(|i| a + (b - a) * i as f64 / substeps as f64)
        .chain(times.iter().copied())
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|p, q| (*p - *q).abs() <= 1e-15 * (b - a).abs().max(1.0));

    let mut s = TruncSig::trivial(dim, depth);
    let mut seg = 0usize;
    for w in breaks.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let mid = 0.5 * (t0 + t1);
        while seg + 2 < times.len() && times[seg + 1] <= mid {
            seg += 1;
        }
        let dt = times[seg + 1] - times[seg];
        let slope: Vec<f64> = values[seg + 1]
            .iter()
            .zip(&values[seg])
            .map(|(q, p)| (q - p) / dt)
            .collect();
        let h = t1 - t0;
        let f = |state: &TruncSig| tensor_times_vector(state, &slope);
        let k1 = f(&s);
        let k2 = f(&axpy(&s, &k1, h / 2.0));
        let k3 = f(&axpy(&s, &k2, h / 2.0));
        let k4 = f(&axpy(&s, &k3, h));
        for lvl in 1..=depth {
            for (idx, slot) in s.levels[lvl].iter_mut().enumerate() {
                *slot += h / 6.0
                    * (k1.levels[lvl][idx]
                        + 2.0 * k2.levels[lvl][idx]
                        + 2.0 * k3.levels[lvl][idx]
                        + k4.levels[lvl][idx]);
            }
        }
    }
    s
}

/// `(S ⊗ v)` as a truncated tensor: level `k` is `S_{k-1} ⊗ v`, level 0 is 0.
fn tensor_times_vector(s: &TruncSig, v: &[f64]) -> TruncSig {
    let mut levels = vec![vec![0.0]];
    for k in 1..=s.depth {
        let prev = &s.levels[k - 1];
        let mut level = Vec::with_capacity(prev.len() * v.len());
        for &p in prev {
            level.extend(v.iter().map(|&vj| p * vj));
        }
        levels.push(level);
    }
    TruncSig {
        dim: s.dim,
        depth: s.depth,
        levels,
    }
}

fn axpy(s: &TruncSig, k: &TruncSig, h: f64) -> TruncSig {
    TruncSig {
        dim: s.dim,
        depth: s.depth,
        levels: s
            .levels
            .iter()
            .zip(&k.levels)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + h * y).collect())
            .collect(),
    }
}

/// `⟨S, e⟩ = Σ c_w S_w`.
pub fn pair(s: &TruncSig, e: &TensorElem) -> Result<f64> {
    if e.alphabet() != s.dim {
        return Err(Error::usage(format!(
            "tensor element over {} letters paired with a signature in dimension {}",
            e.alphabet(),
            s.dim
        )));
    }
    let mut acc = 0.0;
    for (w, c) in e.terms() {
        acc += c.to_f64().unwrap_or(f64::NAN) * s.entry(w)?;
    }
    Ok(acc)
}
