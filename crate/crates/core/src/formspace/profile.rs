//! Rank histograms over the nonzero members of a span of matrices.
//!
//! Exhaustive enumeration walks the span with an odometer over GF(p)
//! coordinates, so moving to the next member costs one matrix addition.
//! The index space is cut into chunks by its top digits and the chunks are
//! processed by rayon; sampled enumeration derives one RNG per fixed-size
//! chunk of samples from the seed. Histograms are summed, so the result does
//! not depend on how many workers ran.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactla::{rank_in_place, Mat};
use crate::ffield::BaseField;

/// Default cap on the number of forms enumerated exhaustively.
pub const DEFAULT_BUDGET: u64 = 2_000_000;
pub const DEFAULT_SAMPLES: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 20_240_601;

const SAMPLE_CHUNK: u64 = 256;

/// How to choose between exhaustive and sampled enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Exhaustive only; refuse when over budget.
    Exhaustive,
    /// Exhaustive within budget, otherwise sampled.
    Auto,
    /// Always sampled.
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    pub policy: Policy,
    pub budget: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            policy: Policy::Auto,
            budget: DEFAULT_BUDGET,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

impl EnumConfig {
    pub fn exhaustive() -> Self {
        EnumConfig { policy: Policy::Exhaustive, ..Default::default() }
    }

    pub fn sampled(samples: u64, seed: u64) -> Self {
        EnumConfig { policy: Policy::Sampled, samples, seed, ..Default::default() }
    }

    /// Whether a space of `total` nonzero members would be enumerated exhaustively.
    pub fn plan(&self, total: u128) -> Result<EnumerationMode> {
        let fits = total <= self.budget as u128;
        match self.policy {
            Policy::Exhaustive if fits => Ok(EnumerationMode::Exhaustive),
            Policy::Exhaustive => Err(Error::BudgetExceeded { needed: total, budget: self.budget }),
            Policy::Auto if fits => Ok(EnumerationMode::Exhaustive),
            Policy::Auto | Policy::Sampled => {
                Ok(EnumerationMode::Sampled { count: self.samples, seed: self.seed })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnumerationMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

impl EnumerationMode {
    pub fn is_exhaustive(&self) -> bool {
        matches!(self, EnumerationMode::Exhaustive)
    }
}

impl Serialize for EnumerationMode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EnumerationMode::Exhaustive => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("mode", "exhaustive")?;
                m.end()
            }
            EnumerationMode::Sampled { count, seed } => {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("count", count)?;
                m.serialize_entry("mode", "sampled")?;
                m.serialize_entry("seed", seed)?;
                m.end()
            }
        }
    }
}

/// Histogram of ranks over the enumerated nonzero members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub histogram: BTreeMap<usize, u64>,
    pub mode: EnumerationMode,
}

impl RankProfile {
    pub fn total(&self) -> u64 {
        self.histogram.values().sum()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.histogram.keys().copied().collect()
    }

    pub fn min_rank(&self) -> Option<usize> {
        self.histogram.keys().next().copied()
    }

    /// True when exactly one rank occurs.
    pub fn is_constant(&self) -> bool {
        self.histogram.len() == 1
    }
}

impl Serialize for RankProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let hist: BTreeMap<String, u64> = self.histogram.iter().map(|(r, c)| (r.to_string(), *c)).collect();
        let mut m = s.serialize_map(None)?;
        if let EnumerationMode::Sampled { count, .. } = self.mode {
            m.serialize_entry("count", &count)?;
        }
        m.serialize_entry("histogram", &hist)?;
        match self.mode {
            EnumerationMode::Exhaustive => m.serialize_entry("mode", "exhaustive")?,
            EnumerationMode::Sampled { seed, .. } => {
                m.serialize_entry("mode", "sampled")?;
                m.serialize_entry("seed", &seed)?;
            }
        }
        m.end()
    }
}

/// `q^d - 1`, saturating.
pub fn nonzero_count(q: u32, d: usize) -> u128 {
    (q as u128).checked_pow(d as u32).map_or(u128::MAX, |v| v - 1)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-stream seed derived from a master seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

/// Rank histogram of `Σ λ_t G_t` over all (or sampled) nonzero coefficient
/// vectors `λ ∈ K^d`. When the generators are independent this is the
/// histogram over the nonzero members of their span.
pub fn rank_histogram(f: &BaseField, generators: &[Mat], cfg: &EnumConfig) -> Result<RankProfile> {
    let d = generators.len();
    if d == 0 {
        return Ok(RankProfile { histogram: BTreeMap::new(), mode: EnumerationMode::Exhaustive });
    }
    let (rows, cols) = (generators[0].rows(), generators[0].cols());
    if generators.iter().any(|g| (g.rows(), g.cols()) != (rows, cols)) {
        return Err(Error::Shape("generators of different shapes".into()));
    }
    let mode = cfg.plan(nonzero_count(f.q(), d))?;
    let counts = match mode {
        EnumerationMode::Exhaustive => exhaustive(f, generators, rows, cols),
        EnumerationMode::Sampled { count, seed } => sampled(f, generators, rows, cols, count, seed),
    };
    let histogram = counts.into_iter().enumerate().filter(|&(_, c)| c > 0).collect();
    Ok(RankProfile { histogram, mode })
}

fn exhaustive(f: &BaseField, generators: &[Mat], rows: usize, cols: usize) -> Vec<u64> {
    let p = f.p();
    // additive generators over GF(p): g·p^r spans the same additive group as K·g
    let mut gens: Vec<&[u32]> = Vec::new();
    let scaled: Vec<Mat> =
        generators.iter().flat_map(|g| (0..f.s()).map(move |r| g.scale(f, p.pow(r)))).collect();
    gens.extend(scaled.iter().map(|m| m.data()));
    let digits = gens.len();
    let mut high = 0;
    while high < digits && (p as u64).pow(high as u32) < 64 {
        high += 1;
    }
    let low = digits - high;
    let chunks = (p as u64).pow(high as u32);
    let len = rows * cols;

    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut hist = vec![0u64; rows.min(cols) + 1];
            let mut form = vec![0u32; len];
            let mut c = chunk;
            for g in &gens[low..] {
                let digit = (c % p as u64) as u32;
                c /= p as u64;
                if digit != 0 {
                    for (x, &y) in form.iter_mut().zip(g.iter()) {
                        *x = f.add(*x, f.mul(digit, y));
                    }
                }
            }
            let mut odo = vec![0u32; low];
            let mut scratch = vec![0u32; len];
            let mut first = true;
            loop {
                if !(first && chunk == 0) {
                    scratch.copy_from_slice(&form);
                    hist[rank_in_place(f, &mut scratch, rows, cols)] += 1;
                }
                first = false;
                let mut k = 0;
                loop {
                    if k == low {
                        return hist;
                    }
                    for (x, &y) in form.iter_mut().zip(gens[k].iter()) {
                        *x = f.add(*x, y);
                    }
                    odo[k] += 1;
                    if odo[k] < p {
                        break;
                    }
                    odo[k] = 0;
                    k += 1;
                }
            }
        })
        .reduce(|| vec![0u64; rows.min(cols) + 1], add_hist)
}

fn sampled(f: &BaseField, generators: &[Mat], rows: usize, cols: usize, count: u64, seed: u64) -> Vec<u64> {
    let q = f.q();
    let len = rows * cols;
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, chunk));
            let in_chunk = SAMPLE_CHUNK.min(count - chunk * SAMPLE_CHUNK);
            let mut hist = vec![0u64; rows.min(cols) + 1];
            let mut coeffs = vec![0u32; generators.len()];
            let mut form = vec![0u32; len];
            for _ in 0..in_chunk {
                loop {
                    for c in coeffs.iter_mut() {
                        *c = rng.gen_range(0..q);
                    }
                    if coeffs.iter().any(|&c| c != 0) {
                        break;
                    }
                }
                form.iter_mut().for_each(|x| *x = 0);
                for (&c, g) in coeffs.iter().zip(generators) {
                    if c == 0 {
                        continue;
                    }
                    for (x, &y) in form.iter_mut().zip(g.data()) {
                        *x = f.add(*x, f.mul(c, y));
                    }
                }
                hist[rank_in_place(f, &mut form, rows, cols)] += 1;
            }
            hist
        })
        .reduce(|| vec![0u64; rows.min(cols) + 1], add_hist)
}

fn add_hist(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Run `job` on a dedicated pool with the given number of worker threads.
pub fn run_with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Io(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(job))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rank;

    fn brute(f: &BaseField, gens: &[Mat]) -> BTreeMap<usize, u64> {
        let q = f.q() as u64;
        let d = gens.len();
        let mut h = BTreeMap::new();
        for idx in 1..q.pow(d as u32) {
            let mut c = idx;
            let mut m = Mat::zeros(gens[0].rows(), gens[0].cols());
            for g in gens {
                m = m.add(f, &g.scale(f, (c % q) as u32));
                c /= q;
            }
            *h.entry(rank(f, &m)).or_insert(0) += 1;
        }
        h
    }

    fn some_generators(f: &BaseField, d: usize, n: usize) -> Vec<Mat> {
        let q = f.q();
        (0..d)
            .map(|t| {
                let data = (0..n * n).map(|k| ((k * (t + 2) + t * t + k / 3) as u32) % q).collect();
                Mat::from_vec(n, n, data).unwrap()
            })
            .collect()
    }

    #[test]
    fn exhaustive_matches_brute_force() {
        for (p, s, d, n) in [(3, 1, 3, 3), (5, 1, 2, 3), (3, 2, 2, 2), (7, 1, 3, 2), (3, 1, 5, 4)] {
            let f = BaseField::new(p, s).unwrap();
            let gens = some_generators(&f, d, n);
            let prof = rank_histogram(&f, &gens, &EnumConfig::exhaustive()).unwrap();
            assert_eq!(prof.histogram, brute(&f, &gens), "p={p} s={s} d={d}");
            assert_eq!(prof.total() as u128, nonzero_count(f.q(), d));
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let f = BaseField::new(3, 1).unwrap();
        let gens = some_generators(&f, 6, 4);
        let cfgs = [EnumConfig::exhaustive(), EnumConfig::sampled(1000, 9)];
        for cfg in cfgs {
            let one = run_with_workers(1, || rank_histogram(&f, &gens, &cfg)).unwrap().unwrap();
            let many = run_with_workers(8, || rank_histogram(&f, &gens, &cfg)).unwrap().unwrap();
            assert_eq!(one, many);
        }
    }

    #[test]
    fn budget_policy() {
        let f = BaseField::new(3, 1).unwrap();
        let gens = some_generators(&f, 4, 3);
        let tight = EnumConfig { budget: 79, ..EnumConfig::exhaustive() };
        assert_eq!(rank_histogram(&f, &gens, &tight), Err(Error::BudgetExceeded { needed: 80, budget: 79 }));
        let auto = EnumConfig { budget: 79, policy: Policy::Auto, samples: 50, seed: 1 };
        let prof = rank_histogram(&f, &gens, &auto).unwrap();
        assert_eq!(prof.mode, EnumerationMode::Sampled { count: 50, seed: 1 });
        assert_eq!(prof.total(), 50);
        let exact = EnumConfig { budget: 80, ..EnumConfig::exhaustive() };
        assert!(rank_histogram(&f, &gens, &exact).is_ok());
    }

    #[test]
    fn profile_json_shape() {
        let prof = RankProfile {
            histogram: [(2, 30), (4, 50)].into_iter().collect(),
            mode: EnumerationMode::Exhaustive,
        };
        assert_eq!(
            serde_json::to_string(&prof).unwrap(),
            r#"{"histogram":{"2":30,"4":50},"mode":"exhaustive"}"#
        );
        let sampled = RankProfile { mode: EnumerationMode::Sampled { count: 5, seed: 3 }, ..prof };
        assert_eq!(
            serde_json::to_string(&sampled).unwrap(),
            r#"{"count":5,"histogram":{"2":30,"4":50},"mode":"sampled","seed":3}"#
        );
    }
}
