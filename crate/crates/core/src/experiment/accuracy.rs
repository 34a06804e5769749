//! Majority-vote accuracy curves from recorded per-trial votes.
//!
//! Trials for one pair are i.i.d. given the pair, so the accuracy of an
//! `n`-trial majority is estimated without bias by the probability that `n`
//! votes drawn without replacement from the `M ≥ n` recorded ones hold a
//! correct majority. Averaging over pairs keeps the between-pair correlation
//! that makes the curve plateau.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::oracle::{Label, LabeledPair};
use crate::pipeline::{classical_votes, quantum_votes, LinearSvmModel, QuantumConfig};
use crate::rng;
use crate::{Error, Result};

/// Votes recorded for one pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairVotes {
    pub truth: Label,
    pub votes: Vec<Label>,
}

impl PairVotes {
    pub fn correct(&self) -> usize {
        self.votes.iter().filter(|&&v| v == self.truth).count()
    }

    pub fn len(&self) -> usize {
        self.votes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.votes.is_empty()
    }
}

fn ln_choose(n: usize, k: usize, ln_fact: &[f64]) -> f64 {
    ln_fact[n] - ln_fact[k] - ln_fact[n - k]
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    for i in 1..=n {
        out.push(out[i - 1] + (i as f64).ln());
    }
    out
}

/// Probability that a size-`n` subset of `total` votes, `correct` of which
/// are right, has more than `n/2` right votes.
pub fn majority_accuracy(correct: usize, total: usize, n: usize) -> Result<f64> {
    if n.is_multiple_of(2) {
        return Err(Error::arg(format!("number of trials must be odd, got {n}")));
    }
    if n > total || correct > total {
        return Err(Error::arg(format!(
            "cannot draw {n} of {total} votes ({correct} correct)"
        )));
    }
    let lf = ln_factorials(total);
    let denom = ln_choose(total, n, &lf);
    let wrong = total - correct;
    let p: f64 = (n / 2 + 1..=n.min(correct))
        .filter(|&k| n - k <= wrong)
        .map(|k| (ln_choose(correct, k, &lf) + ln_choose(wrong, n - k, &lf) - denom).exp())
        .sum();
    Ok(p.clamp(0.0, 1.0))
}

/// Mean of [`majority_accuracy`] over pairs.
pub fn accuracy_at(records: &[PairVotes], n: usize) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::InvalidDataset("no vote records".into()));
    }
    let mut sum = 0.0;
    for r in records {
        sum += majority_accuracy(r.correct(), r.len(), n)?;
    }
    Ok(sum / records.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n_trials: usize,
    pub accuracy: f64,
}

pub fn accuracy_curve(records: &[PairVotes], trials: &[usize]) -> Result<Vec<CurvePoint>> {
    trials
        .iter()
        .map(|&n| {
            Ok(CurvePoint {
                n_trials: n,
                accuracy: accuracy_at(records, n)?,
            })
        })
        .collect()
}

/// Smallest odd trial count whose accuracy reaches the target, if any up to
/// the cap does.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RequiredTrials {
    pub n_required: Option<usize>,
    pub cap: usize,
    pub accuracy_at_cap: f64,
}

impl RequiredTrials {
    pub fn saturated(&self) -> bool {
        self.n_required.is_none()
    }

    /// `n_required`, with saturated cells counted one odd step past the cap.
    pub fn n_or_beyond_cap(&self) -> usize {
        self.n_required.unwrap_or(self.cap + 2)
    }
}

/// `cap` must be odd and no larger than the shortest vote stream.
pub fn required_trials(records: &[PairVotes], target: f64, cap: usize) -> Result<RequiredTrials> {
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::arg(format!(
            "target accuracy must lie in [0, 1], got {target}"
        )));
    }
    if cap.is_multiple_of(2) {
        return Err(Error::arg(format!("trial cap must be odd, got {cap}")));
    }
    let mut n_required = None;
    for n in (1..=cap).step_by(2) {
        if accuracy_at(records, n)? >= target {
            n_required = Some(n);
            break;
        }
    }
    Ok(RequiredTrials {
        n_required,
        cap,
        accuracy_at_cap: accuracy_at(records, cap)?,
    })
}

/// `votes` randomized classical trials per pair; pair `i` uses the stream
/// rooted at `mix(seed, i)`.
pub fn classical_vote_records(
    pairs: &[LabeledPair],
    model: &LinearSvmModel,
    votes: usize,
    seed: u64,
) -> Result<Vec<PairVotes>> {
    pairs
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            Ok(PairVotes {
                truth: p.label,
                votes: classical_votes(
                    &p.parent,
                    &p.child,
                    model,
                    votes,
                    rng::mix(seed, i as u64),
                )?,
            })
        })
        .collect()
}

pub fn quantum_vote_records(
    pairs: &[LabeledPair],
    model: &LinearSvmModel,
    votes: usize,
    config: &QuantumConfig,
    seed: u64,
) -> Result<Vec<PairVotes>> {
    pairs
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            Ok(PairVotes {
                truth: p.label,
                votes: quantum_votes(
                    &p.parent,
                    &p.child,
                    model,
                    votes,
                    config,
                    rng::mix(seed, i as u64),
                )?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use rand::Rng;

    use super::*;
    use crate::pipeline::{majority_vote, p_error};

    fn record(correct: usize, total: usize) -> PairVotes {
        let mut votes = vec![Label::VertexMinor; correct];
        votes.extend(vec![Label::NotVertexMinor; total - correct]);
        PairVotes {
            truth: Label::VertexMinor,
            votes,
        }
    }

    #[test]
    fn full_draw_is_the_plain_majority() {
        assert_eq!(majority_accuracy(6, 11, 11).unwrap(), 1.0);
        assert_eq!(majority_accuracy(5, 11, 11).unwrap(), 0.0);
        assert!((majority_accuracy(7, 10, 1).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn three_of_five_by_enumeration() {
        // subsets of {1,1,1,0,0} of size 3 with at least two ones
        let votes = [1, 1, 1, 0, 0];
        let mut good = 0;
        let mut all = 0;
        for a in 0..5 {
            for b in a + 1..5 {
                for c in b + 1..5 {
                    all += 1;
                    if votes[a] + votes[b] + votes[c] >= 2 {
                        good += 1;
                    }
                }
            }
        }
        let expected = good as f64 / all as f64;
        assert!((majority_accuracy(3, 5, 3).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn approaches_binomial_for_long_streams() {
        let q = 0.62;
        let total = 20_000;
        let correct = (q * total as f64) as usize;
        for n in [1, 5, 21, 51] {
            let h = majority_accuracy(correct, total, n).unwrap();
            let b = 1.0 - p_error(n, 1.0 - q).unwrap();
            assert!((h - b).abs() < 2e-3, "{n}: {h} vs {b}");
        }
    }

    #[test]
    fn unbiased_for_subsampled_majorities() {
        let rec = record(9, 15);
        let exact = majority_accuracy(9, 15, 5).unwrap();
        let mut r = crate::rng::seeded(3);
        let reps = 40_000;
        let mut hits = 0;
        for _ in 0..reps {
            let mut idx: Vec<usize> = (0..15).collect();
            for i in 0..5 {
                let j = r.random_range(i..15);
                idx.swap(i, j);
            }
            let pick: Vec<Label> = idx[..5].iter().map(|&i| rec.votes[i]).collect();
            hits += (majority_vote(&pick).unwrap() == Label::VertexMinor) as usize;
        }
        let mc = hits as f64 / reps as f64;
        let sigma = (exact * (1.0 - exact) / reps as f64).sqrt();
        assert!((mc - exact).abs() < 4.0 * sigma, "{mc} vs {exact}");
    }

    #[test]
    fn plateau_from_bad_pairs() {
        let records = vec![record(80, 101), record(70, 101), record(30, 101)];
        let curve = accuracy_curve(&records, &[1, 51, 101]).unwrap();
        assert!(curve[1].accuracy > curve[0].accuracy);
        assert!((curve[2].accuracy - 2.0 / 3.0).abs() < 1e-12);
        let req = required_trials(&records, 0.9, 101).unwrap();
        assert!(req.saturated());
        assert_eq!(req.n_or_beyond_cap(), 103);
        let req = required_trials(&records[..2], 0.95, 101).unwrap();
        let n = req.n_required.unwrap();
        assert!(accuracy_at(&records[..2], n).unwrap() >= 0.95);
        assert!(n == 1 || accuracy_at(&records[..2], n - 2).unwrap() < 0.95);
    }

    #[test]
    fn argument_checks() {
        assert!(majority_accuracy(3, 5, 4).is_err());
        assert!(majority_accuracy(3, 5, 7).is_err());
        assert!(accuracy_at(&[], 1).is_err());
        assert!(required_trials(&[record(1, 3)], 0.9, 2).is_err());
    }
}
