//! Seeded simulation of a memory with partially stuck cells and random
//! errors.
//!
//! Every trial draws from its own ChaCha8 stream (`seed`, stream = trial
//! index), so reports are reproducible and independent of thread count.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::psmc::{AllOneMaskingCode, Message, PsmcScheme, StuckProfile};

/// Where errors may land.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorModel {
    /// Only healthy cells are corrupted.
    NonOverlapping,
    /// Any cell, as long as stuck cells stay at or above their level.
    Overlapping,
}

impl ErrorModel {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorModel::NonOverlapping => "nonoverlap",
            ErrorModel::Overlapping => "overlap",
        }
    }
}

impl fmt::Display for ErrorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ErrorModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<ErrorModel> {
        match s {
            "nonoverlap" | "non_overlapping" => Ok(ErrorModel::NonOverlapping),
            "overlap" | "overlapping" => Ok(ErrorModel::Overlapping),
            other => Err(Error::InvalidBoundQuery(format!(
                "unknown error model '{other}'"
            ))),
        }
    }
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `u` distinct positions out of `n`, uniformly, all at level `level`.
pub fn sample_stuck_with<R: Rng + ?Sized>(
    n: usize,
    u: usize,
    level: u32,
    rng: &mut R,
) -> Result<StuckProfile> {
    if u > n {
        return Err(Error::InvalidStuckProfile(format!(
            "cannot pick {u} stuck cells out of {n}"
        )));
    }
    let positions = index::sample(rng, n, u).into_vec();
    StuckProfile::uniform(n, positions, level)
}

pub fn sample_stuck(n: usize, u: usize, level: u32, seed: u64) -> Result<StuckProfile> {
    sample_stuck_with(n, u, level, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Values a cell may take after corruption: anything but the current value,
/// restricted to `>= level` on stuck cells.
fn substitutes(field: &Field, current: u32, level: Option<u32>) -> Vec<u32> {
    let low = level.unwrap_or(0);
    (low..field.order()).filter(|&v| v != current).collect()
}

/// Changes exactly `t_actual` coordinates of `word`.
pub fn inject_errors_with<R: Rng + ?Sized>(
    field: &Field,
    word: &[u32],
    t_actual: usize,
    model: ErrorModel,
    stuck: &StuckProfile,
    rng: &mut R,
) -> Result<Vec<u32>> {
    if stuck.length() != word.len() {
        return Err(Error::Dimension(format!(
            "stuck profile covers {} cells, word has {}",
            stuck.length(),
            word.len()
        )));
    }
    let support: Vec<usize> = (0..word.len())
        .filter(|&i| match stuck.level_at(i) {
            None => true,
            Some(s) => {
                model == ErrorModel::Overlapping && !substitutes(field, word[i], Some(s)).is_empty()
            }
        })
        .collect();
    if t_actual > support.len() {
        return Err(Error::Injection(format!(
            "{t_actual} errors requested but only {} cells can change under the {model} model",
            support.len()
        )));
    }
    let mut out = word.to_vec();
    for k in index::sample(rng, support.len(), t_actual) {
        let pos = support[k];
        let choices = substitutes(field, word[pos], stuck.level_at(pos));
        out[pos] = choices[rng.gen_range(0..choices.len())];
    }
    Ok(out)
}

pub fn inject_errors(
    field: &Field,
    word: &[u32],
    t_actual: usize,
    model: ErrorModel,
    stuck: &StuckProfile,
    seed: u64,
) -> Result<Vec<u32>> {
    inject_errors_with(
        field,
        word,
        t_actual,
        model,
        stuck,
        &mut ChaCha8Rng::seed_from_u64(seed),
    )
}

/// A scheme the trial harness can drive.
pub trait MaskingScheme: Sync {
    type Message: PartialEq + Send;

    fn field(&self) -> &Field;
    /// Number of cells per codeword.
    fn length(&self) -> usize;
    /// Number of stuck cells the encoder guarantees to mask.
    fn max_stuck(&self) -> usize;
    fn random_message(&self, rng: &mut ChaCha8Rng) -> Self::Message;
    fn encode(&self, message: &Self::Message, stuck: &StuckProfile) -> Result<Vec<u32>>;
    fn decode(&self, received: &[u32]) -> Result<Self::Message>;
}

impl MaskingScheme for PsmcScheme {
    type Message = Message;

    fn field(&self) -> &Field {
        PsmcScheme::field(self)
    }

    fn length(&self) -> usize {
        PsmcScheme::length(self)
    }

    fn max_stuck(&self) -> usize {
        self.params().u
    }

    fn random_message(&self, rng: &mut ChaCha8Rng) -> Message {
        let q = self.field().order();
        let params = self.params();
        let free = (0..params.k1).map(|_| rng.gen_range(0..q)).collect();
        let restricted = (0..params.l).map(|_| 2 * rng.gen_range(0..q / 2)).collect();
        Message { free, restricted }
    }

    fn encode(&self, message: &Message, stuck: &StuckProfile) -> Result<Vec<u32>> {
        PsmcScheme::encode(self, message, stuck)
    }

    fn decode(&self, received: &[u32]) -> Result<Message> {
        PsmcScheme::decode(self, received)
    }
}

impl MaskingScheme for AllOneMaskingCode {
    type Message = Vec<u32>;

    fn field(&self) -> &Field {
        self.code().field()
    }

    fn length(&self) -> usize {
        AllOneMaskingCode::length(self)
    }

    fn max_stuck(&self) -> usize {
        AllOneMaskingCode::max_stuck(self)
    }

    fn random_message(&self, rng: &mut ChaCha8Rng) -> Vec<u32> {
        let q = self.field().order();
        (0..self.message_len())
            .map(|_| rng.gen_range(0..q))
            .collect()
    }

    fn encode(&self, message: &Vec<u32>, stuck: &StuckProfile) -> Result<Vec<u32>> {
        AllOneMaskingCode::encode(self, message, stuck)
    }

    fn decode(&self, received: &[u32]) -> Result<Vec<u32>> {
        AllOneMaskingCode::decode(self, received)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialConfig {
    pub trials: u64,
    pub t_actual: usize,
    pub model: ErrorModel,
    pub seed: u64,
}

/// Aggregated outcome of a simulation. Each failed trial is counted once,
/// in the first class that applies: masking, then decoding, then mismatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialReport {
    pub trials: u64,
    pub t_actual: usize,
    pub model: ErrorModel,
    pub seed: u64,
    pub masking_violations: u64,
    pub decode_failures: u64,
    pub message_mismatches: u64,
}

impl TrialReport {
    pub const CSV_HEADER: &'static str =
        "trials,t_actual,model,seed,masking_violations,decode_failures,message_mismatches";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.trials,
            self.t_actual,
            self.model,
            self.seed,
            self.masking_violations,
            self.decode_failures,
            self.message_mismatches
        )
    }

    pub fn failures(&self) -> u64 {
        self.masking_violations + self.decode_failures + self.message_mismatches
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Ok,
    Masking,
    Decode,
    Mismatch,
}

fn one_trial<S: MaskingScheme>(scheme: &S, config: &TrialConfig, index: u64) -> Result<Outcome> {
    let mut rng = trial_rng(config.seed, index);
    let message = scheme.random_message(&mut rng);
    let stuck = sample_stuck_with(scheme.length(), scheme.max_stuck(), 1, &mut rng)?;
    let codeword = match scheme.encode(&message, &stuck) {
        Ok(c) if stuck.admits(&c) => c,
        _ => return Ok(Outcome::Masking),
    };
    let received = inject_errors_with(
        scheme.field(),
        &codeword,
        config.t_actual,
        config.model,
        &stuck,
        &mut rng,
    )?;
    Ok(match scheme.decode(&received) {
        Err(_) => Outcome::Decode,
        Ok(m) if m != message => Outcome::Mismatch,
        Ok(_) => Outcome::Ok,
    })
}

/// Runs `config.trials` independent encode / corrupt / decode cycles with
/// the scheme's full stuck-cell budget at level 1.
pub fn run_trials<S: MaskingScheme>(scheme: &S, config: TrialConfig) -> Result<TrialReport> {
    let outcomes = (0..config.trials)
        .into_par_iter()
        .map(|i| one_trial(scheme, &config, i))
        .collect::<Result<Vec<Outcome>>>()?;
    let count = |o: Outcome| outcomes.iter().filter(|&&x| x == o).count() as u64;
    Ok(TrialReport {
        trials: config.trials,
        t_actual: config.t_actual,
        model: config.model,
        seed: config.seed,
        masking_violations: count(Outcome::Masking),
        decode_failures: count(Outcome::Decode),
        message_mismatches: count(Outcome::Mismatch),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::LinearCode;
    use crate::matrix::Matrix;

    #[test]
    fn sample_stuck_edges() {
        assert!(sample_stuck(5, 0, 1, 7).unwrap().is_empty());
        assert_eq!(
            sample_stuck(5, 5, 1, 7).unwrap().positions(),
            &[0, 1, 2, 3, 4]
        );
        assert_eq!(
            sample_stuck(20, 4, 1, 9).unwrap(),
            sample_stuck(20, 4, 1, 9).unwrap()
        );
        assert!(sample_stuck(3, 4, 1, 0).is_err());
    }

    #[test]
    fn injection_weight_and_support() {
        let f = Field::new(2, 2).unwrap();
        let word = vec![1, 2, 3, 0, 1, 2, 3, 0];
        let stuck = StuckProfile::uniform(8, vec![0, 2, 5], 1).unwrap();
        assert_eq!(
            inject_errors(&f, &word, 0, ErrorModel::Overlapping, &stuck, 3).unwrap(),
            word
        );
        for seed in 0..500 {
            for model in [ErrorModel::NonOverlapping, ErrorModel::Overlapping] {
                let y = inject_errors(&f, &word, 3, model, &stuck, seed).unwrap();
                let changed: Vec<usize> = (0..8).filter(|&i| y[i] != word[i]).collect();
                assert_eq!(changed.len(), 3);
                assert!(stuck.admits(&y));
                if model == ErrorModel::NonOverlapping {
                    assert!(changed.iter().all(|&i| !stuck.is_stuck(i)));
                }
            }
        }
    }

    #[test]
    fn injection_without_support_fails() {
        let f = Field::new(2, 2).unwrap();
        let stuck = StuckProfile::uniform(3, vec![0, 1, 2], 1).unwrap();
        assert!(matches!(
            inject_errors(&f, &[1, 2, 3], 1, ErrorModel::NonOverlapping, &stuck, 0),
            Err(Error::Injection(_))
        ));
        // level q-1 cells holding q-1 have nowhere to go
        let top = StuckProfile::uniform(2, vec![0, 1], 3).unwrap();
        assert!(inject_errors(&f, &[3, 3], 1, ErrorModel::Overlapping, &top, 0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn corruption_weight_is_exact(
            seed in 0u64..1000,
            t in 0usize..6,
            stuck_cells in proptest::sample::subsequence((0..10).collect::<Vec<usize>>(), 0..=4),
            overlap in proptest::bool::ANY,
        ) {
            let f = Field::new(2, 2).unwrap();
            let word: Vec<u32> = (0..10).map(|i| if stuck_cells.contains(&i) { 1 + (i as u32 % 3) } else { i as u32 % 4 }).collect();
            let stuck = StuckProfile::uniform(10, stuck_cells, 1).unwrap();
            let model = if overlap { ErrorModel::Overlapping } else { ErrorModel::NonOverlapping };
            let y = inject_errors(&f, &word, t, model, &stuck, seed).unwrap();
            proptest::prop_assert_eq!(y.iter().zip(&word).filter(|(a, b)| a != b).count(), t);
            proptest::prop_assert!(stuck.admits(&y));
            proptest::prop_assert_eq!(&y, &inject_errors(&f, &word, t, model, &stuck, seed).unwrap());
        }
    }

    #[test]
    fn harness_on_all_one_code() {
        let f = Field::new(3, 1).unwrap();
        let g = Matrix::from_rows(&f, &[vec![1, 1, 1, 1, 1], vec![0, 1, 2, 0, 1]]).unwrap();
        let scheme = AllOneMaskingCode::new(&LinearCode::from_generator(g).unwrap(), 1).unwrap();
        let config = TrialConfig {
            trials: 300,
            t_actual: 1,
            model: ErrorModel::Overlapping,
            seed: 11,
        };
        let report = run_trials(&scheme, config).unwrap();
        assert_eq!(report.failures(), 0);
        assert_eq!(report, run_trials(&scheme, config).unwrap());
        let empty = run_trials(
            &scheme,
            TrialConfig {
                trials: 0,
                ..config
            },
        )
        .unwrap();
        assert_eq!(empty.csv_row(), "0,1,overlap,11,0,0,0");
    }
}
