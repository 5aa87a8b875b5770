//! Monte-Carlo estimation of logical error rates.
//!
//! A bit-flip sample draws an error `e`, decodes `s = H·e`, and reports a
//! logical failure when the residual `e ⊕ ε` is a logical operator. A
//! phenomenological sample runs several noisy measurement rounds, decodes the
//! time-stacked puzzle and checks the cumulative residual after the last
//! (noiseless) round. A decode that hits its timeout applies no correction
//! and, unless the residual happens to be a stabilizer, counts as a failure.
//!
//! Every sample gets its own ChaCha stream keyed by `(seed, sample index)`,
//! so a batch is reproducible regardless of how many workers run it.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::ColorCode;
use crate::decoder::{DecodeStatus, Decoder};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::lightsout::LightsOutInstance;
use crate::maxsat::{MaxSatInstance, SolveOutcome};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseModel {
    /// Independent flips of each qubit with probability `p`.
    BitFlip { p: f64 },
    /// Fresh data flips with probability `p` before each of `rounds`
    /// measurement rounds, and outcome flips with probability `q` on all but
    /// the last round.
    Phenomenological { p: f64, q: f64, rounds: usize },
}

impl NoiseModel {
    pub fn p(&self) -> f64 {
        match *self {
            NoiseModel::BitFlip { p } | NoiseModel::Phenomenological { p, .. } => p,
        }
    }

    fn validate(&self) -> Result<()> {
        let probs: &[f64] = match self {
            NoiseModel::BitFlip { p } => &[*p],
            NoiseModel::Phenomenological { p, q, rounds } => {
                if *rounds < 1 {
                    return Err(Error::InvalidArgument("rounds must be at least 1".into()));
                }
                &[*p, *q]
            }
        };
        match probs.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            Some(x) => Err(Error::InvalidArgument(format!("probability {x} outside [0, 1]"))),
            None => Ok(()),
        }
    }
}

/// Aggregate over the samples of one `(distance, p)` point. Field order is
/// the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub distance: usize,
    pub p: f64,
    pub samples: u64,
    pub logical_errors: u64,
    pub non_converged: u64,
    pub ler: f64,
    pub ler_stderr: f64,
    pub mean_decode_us: f64,
    pub seed: u64,
}

impl SimRecord {
    pub fn new(
        distance: usize,
        p: f64,
        samples: u64,
        logical_errors: u64,
        non_converged: u64,
        total_decode_us: f64,
        seed: u64,
    ) -> Self {
        let ler = if samples == 0 { 0.0 } else { logical_errors as f64 / samples as f64 };
        let ler_stderr = if samples == 0 { 0.0 } else { (ler * (1.0 - ler) / samples as f64).sqrt() };
        Self {
            distance,
            p,
            samples,
            logical_errors,
            non_converged,
            ler,
            ler_stderr,
            mean_decode_us: if samples == 0 { 0.0 } else { total_decode_us / samples as f64 },
            seed,
        }
    }

    /// Equality on everything except wall-clock timing.
    pub fn same_statistics(&self, other: &SimRecord) -> bool {
        let mut a = self.clone();
        a.mean_decode_us = other.mean_decode_us;
        &a == other
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleOutcome {
    pub logical: bool,
    pub non_converged: bool,
    pub decode_us: f64,
}

/// Per-worker sampling state: the code plus a pre-encoded solver instance.
#[derive(Clone, Debug)]
pub struct Sampler<'a> {
    code: &'a ColorCode,
    noise: NoiseModel,
    timeout: Option<Duration>,
    kind: SamplerKind,
}

#[derive(Clone, Debug)]
enum SamplerKind {
    Planar(Decoder),
    Stacked(MaxSatInstance),
}

impl<'a> Sampler<'a> {
    pub fn new(code: &'a ColorCode, noise: NoiseModel, timeout: Option<Duration>) -> Result<Self> {
        noise.validate()?;
        let kind = match noise {
            NoiseModel::BitFlip { .. } => SamplerKind::Planar(Decoder::new(code)),
            NoiseModel::Phenomenological { rounds, .. } => {
                SamplerKind::Stacked(MaxSatInstance::encode(&LightsOutInstance::build_stack(code, rounds)?))
            }
        };
        Ok(Self { code, noise, timeout, kind })
    }

    fn flips(rng: &mut impl Rng, len: usize, p: f64) -> BitVec {
        let mut v = BitVec::zeros(len);
        if p > 0.0 {
            for i in 0..len {
                if rng.gen_bool(p) {
                    v.set(i, true);
                }
            }
        }
        v
    }

    pub fn run_sample(&mut self, rng: &mut impl Rng) -> Result<SampleOutcome> {
        let n = self.code.n_qubits();
        let (error, correction, non_converged, decode_us) = match (&mut self.kind, self.noise) {
            (SamplerKind::Planar(decoder), NoiseModel::BitFlip { p }) => {
                let error = Self::flips(rng, n, p);
                let syndrome = self.code.syndrome(&error)?;
                let result = decoder.decode(&syndrome, self.timeout)?;
                let us = result.solve_time.as_secs_f64() * 1e6;
                (error, result.estimate, result.status == DecodeStatus::NonConverged, us)
            }
            (SamplerKind::Stacked(instance), NoiseModel::Phenomenological { p, q, rounds }) => {
                let n_faces = self.code.n_faces();
                let mut cumulative = BitVec::zeros(n);
                let mut previous = BitVec::zeros(n_faces);
                let mut detectors = BitVec::zeros(n_faces * rounds);
                for t in 0..rounds {
                    cumulative.xor_assign(&Self::flips(rng, n, p));
                    let mut measured = self.code.syndrome(&cumulative)?;
                    if t + 1 < rounds {
                        measured.xor_assign(&Self::flips(rng, n_faces, q));
                    }
                    for f in 0..n_faces {
                        if measured.get(f) != previous.get(f) {
                            detectors.set(t * n_faces + f, true);
                        }
                    }
                    previous = measured;
                }
                instance.set_syndrome(&detectors)?;
                let start = Instant::now();
                let outcome = instance.solve(self.timeout);
                let us = start.elapsed().as_secs_f64() * 1e6;
                match outcome {
                    SolveOutcome::Optimal(a) => {
                        // Only the space-like (data) switches act on qubits.
                        let mut correction = BitVec::zeros(n);
                        for t in 0..rounds {
                            for q in 0..n {
                                if a.values.get(t * n + q) {
                                    correction.flip(q);
                                }
                            }
                        }
                        (cumulative, correction, false, us)
                    }
                    SolveOutcome::NonConverged => (cumulative, BitVec::zeros(n), true, us),
                    SolveOutcome::Unsatisfiable => return Err(Error::Unsatisfiable),
                }
            }
            _ => unreachable!("sampler kind always matches its noise model"),
        };
        let residual = error.xor(&correction)?;
        let logical = if self.code.syndrome(&residual)?.is_zero() {
            self.code.is_logical_error(&residual)?
        } else {
            true
        };
        Ok(SampleOutcome { logical, non_converged, decode_us })
    }
}

/// One sample with a fresh decoder.
pub fn run_sample(
    code: &ColorCode,
    noise: NoiseModel,
    rng: &mut impl Rng,
    timeout: Option<Duration>,
) -> Result<SampleOutcome> {
    Sampler::new(code, noise, timeout)?.run_sample(rng)
}

/// The random stream used for sample `index` of a batch seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Debug)]
pub struct BatchConfig {
    pub samples: u64,
    /// Stop once this many logical errors have been collected.
    pub max_logical: Option<u64>,
    pub seed: u64,
    pub workers: usize,
    pub timeout: Option<Duration>,
}

impl BatchConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self { samples, max_logical: None, seed, workers: 1, timeout: None }
    }
}

const CHUNK: u64 = 256;

/// Runs up to `config.samples` samples, stopping early at `max_logical`
/// logical errors. Samples are processed in fixed-size chunks and scanned in
/// index order, so the stopping point does not depend on `workers`.
pub fn run_batch(code: &ColorCode, noise: NoiseModel, config: &BatchConfig) -> Result<SimRecord> {
    if config.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let template = Sampler::new(code, noise, config.timeout)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;

    let (mut taken, mut logical, mut non_converged, mut total_us) = (0u64, 0u64, 0u64, 0.0f64);
    let mut start = 0u64;
    'chunks: while start < config.samples {
        let end = (start + CHUNK * config.workers.max(1) as u64).min(config.samples);
        let outcomes: Vec<SampleOutcome> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map_init(
                    || template.clone(),
                    |sampler, i| sampler.run_sample(&mut sample_rng(config.seed, i)),
                )
                .collect::<Result<Vec<_>>>()
        })?;
        for o in outcomes {
            taken += 1;
            logical += o.logical as u64;
            non_converged += o.non_converged as u64;
            total_us += o.decode_us;
            if config.max_logical.is_some_and(|m| logical >= m) {
                break 'chunks;
            }
        }
        start = end;
    }
    Ok(SimRecord::new(code.distance(), noise.p(), taken, logical, non_converged, total_us, config.seed))
}

pub fn write_csv(records: &[SimRecord], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<SimRecord>> {
    let text = fs::read_to_string(path)?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let expected = csv::StringRecord::from(vec![
        "distance",
        "p",
        "samples",
        "logical_errors",
        "non_converged",
        "ler",
        "ler_stderr",
        "mean_decode_us",
        "seed",
    ]);
    if reader.headers()? != &expected {
        return Err(Error::Parse(format!(
            "unexpected CSV header {:?}",
            reader.headers()?.iter().collect::<Vec<_>>()
        )));
    }
    reader.deserialize().map(|r| r.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_samples_never_fail() {
        let code = ColorCode::triangular(5).unwrap();
        let mut rng = sample_rng(1, 0);
        let o = run_sample(&code, NoiseModel::BitFlip { p: 0.0 }, &mut rng, None).unwrap();
        assert!(!o.logical && !o.non_converged);
        let pheno = NoiseModel::Phenomenological { p: 0.0, q: 0.0, rounds: 3 };
        assert!(!run_sample(&code, pheno, &mut rng, None).unwrap().logical);
    }

    #[test]
    fn all_qubits_flipped_is_a_logical_error() {
        let code = ColorCode::triangular(3).unwrap();
        assert!(code.syndrome(&BitVec::ones(7)).unwrap().is_zero());
        let o = run_sample(&code, NoiseModel::BitFlip { p: 1.0 }, &mut sample_rng(7, 0), None).unwrap();
        assert!(o.logical);
    }

    #[test]
    fn invalid_noise_rejected() {
        let code = ColorCode::triangular(3).unwrap();
        assert!(Sampler::new(&code, NoiseModel::BitFlip { p: 1.5 }, None).is_err());
        let bad = NoiseModel::Phenomenological { p: 0.1, q: 0.1, rounds: 0 };
        assert!(Sampler::new(&code, bad, None).is_err());
    }

    #[test]
    fn sample_replay_is_deterministic() {
        let code = ColorCode::triangular(5).unwrap();
        let noise = NoiseModel::BitFlip { p: 0.15 };
        let mut sampler = Sampler::new(&code, noise, None).unwrap();
        for i in 0..50 {
            let a = sampler.run_sample(&mut sample_rng(3, i)).unwrap();
            let b = sampler.run_sample(&mut sample_rng(3, i)).unwrap();
            assert_eq!((a.logical, a.non_converged), (b.logical, b.non_converged));
        }
    }

    #[test]
    fn record_statistics() {
        let r = SimRecord::new(3, 0.1, 100, 25, 0, 500.0, 9);
        assert_eq!(r.ler, 0.25);
        assert!((r.ler_stderr - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert_eq!(r.mean_decode_us, 5.0);
    }

    #[test]
    fn zero_noise_batch() {
        let code = ColorCode::triangular(3).unwrap();
        let r = run_batch(&code, NoiseModel::BitFlip { p: 0.0 }, &BatchConfig::new(300, 1)).unwrap();
        assert_eq!((r.samples, r.logical_errors, r.ler), (300, 0, 0.0));
        assert!(run_batch(&code, NoiseModel::BitFlip { p: 0.0 }, &BatchConfig::new(0, 1)).is_err());
    }

    #[test]
    fn early_stop_and_worker_independence() {
        let code = ColorCode::triangular(3).unwrap();
        let noise = NoiseModel::BitFlip { p: 0.2 };
        let mut cfg = BatchConfig::new(5000, 11);
        cfg.max_logical = Some(40);
        let one = run_batch(&code, noise, &cfg).unwrap();
        assert_eq!(one.logical_errors, 40);
        assert!(one.samples < 5000);
        cfg.workers = 3;
        let three = run_batch(&code, noise, &cfg).unwrap();
        assert!(one.same_statistics(&three));
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let records =
            vec![SimRecord::new(3, 0.05, 10, 1, 0, 20.0, 4), SimRecord::new(5, 0.05, 10, 0, 0, 30.0, 4)];
        write_csv(&records, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "distance,p,samples,logical_errors,non_converged,ler,ler_stderr,mean_decode_us,seed"
        );
        assert_eq!(read_csv(&path).unwrap(), records);

        fs::write(&path, "distance,p\n3,0.1\n").unwrap();
        assert!(read_csv(&path).is_err());
    }
}
