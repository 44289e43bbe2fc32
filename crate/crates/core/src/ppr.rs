//! Pareto pairwise ranking.
//!
//! For a user `i` and two rated items with `R[i][j] > R[i][k]`, the margin
//! `m = U_i·V_j − U_i·V_k` is modelled with a power-law density `m^(−α)`.
//! The trained objective is the log-domain sum
//!
//! ```text
//! L = −α Σ ln(U_i·V_j − U_i·V_k)      over pairs with R[i][j] > R[i][k]
//! ```
//!
//! and each admissible pair takes one gradient step on its own term:
//!
//! ```text
//! U_i ← U_i + γα (V_j − V_k) / m
//! V_j ← V_j + γα U_i / m
//! V_k ← V_k − γα U_i / m
//! ```
//!
//! All three right-hand sides read the pre-update rows. Pairs whose margin
//! is at or below `epsilon` are skipped, since the log is undefined for
//! `m ≤ 0` and the `1/m` step explodes near zero.

use std::io::Write;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataio::RatingMatrix;
use crate::error::{Error, Result};
use crate::model::{init_model, FactorModel, Scorer};
use crate::scalar::{norm, Scalar};

/// Hyperparameters of [`train_ppr`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig<T = f64> {
    /// Power-law exponent; held constant during training.
    pub alpha: T,
    /// Learning rate.
    pub gamma: T,
    /// Latent rank.
    pub d: usize,
    pub max_iters: usize,
    /// Users drawn per iteration, capped at the number of users.
    pub user_sample_size: usize,
    /// Items drawn per selected user, capped at that user's rating count.
    pub item_sample_size: usize,
    /// Smallest margin that still receives an update.
    pub epsilon: T,
    /// Norm cap applied to each of the three row deltas of one update.
    pub max_step_norm: T,
    pub seed: u64,
}

impl<T: Scalar> Default for TrainConfig<T> {
    fn default() -> Self {
        TrainConfig {
            alpha: T::one(),
            gamma: T::of(0.1),
            d: 10,
            max_iters: 100,
            user_sample_size: 512,
            item_sample_size: 32,
            epsilon: T::of(1e-6),
            max_step_norm: T::one(),
            seed: 0,
        }
    }
}

impl<T: Scalar> TrainConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("alpha", self.alpha)?;
        positive("gamma", self.gamma)?;
        positive("epsilon", self.epsilon)?;
        positive("max_step_norm", self.max_step_norm)?;
        for (name, v) in
            [("d", self.d), ("user_sample_size", self.user_sample_size), ("item_sample_size", self.item_sample_size)]
        {
            if v == 0 {
                return Err(Error::InvalidParameter(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }

    pub fn step(&self) -> PairStep<T> {
        PairStep { gamma: self.gamma, alpha: self.alpha, epsilon: self.epsilon, max_step_norm: self.max_step_norm }
    }
}

/// A preference triple: `user` rated `preferred` strictly above `other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairSample {
    pub user: usize,
    pub preferred: usize,
    pub other: usize,
}

impl PairSample {
    /// The pair, if the strict rating inequality holds in `matrix`.
    pub fn admissible<T: Scalar>(
        matrix: &RatingMatrix<T>,
        user: usize,
        preferred: usize,
        other: usize,
    ) -> Option<Self> {
        let (a, b) = (matrix.get(user, preferred)?, matrix.get(user, other)?);
        (a > b).then_some(PairSample { user, preferred, other })
    }
}

/// `U_user·V_preferred − U_user·V_other`.
pub fn margin<T: Scalar>(model: &FactorModel<T>, pair: PairSample) -> Result<T> {
    Ok(model.score(pair.user, pair.preferred)? - model.score(pair.user, pair.other)?)
}

/// `−α ln(margin)`; errors when the margin is not positive.
pub fn pair_loss<T: Scalar>(model: &FactorModel<T>, pair: PairSample, alpha: T) -> Result<T> {
    let m = margin(model, pair)?;
    if m <= T::zero() {
        return Err(Error::NonPositiveMargin(m.as_f64()));
    }
    Ok(-alpha * m.ln())
}

/// Step parameters for a single pair update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairStep<T = f64> {
    pub gamma: T,
    pub alpha: T,
    pub epsilon: T,
    pub max_step_norm: T,
}

impl<T: Scalar> PairStep<T> {
    /// Unit step-norm cap.
    pub fn new(gamma: T, alpha: T, epsilon: T) -> Self {
        PairStep { gamma, alpha, epsilon, max_step_norm: T::one() }
    }

    pub fn with_max_step_norm(mut self, cap: T) -> Self {
        self.max_step_norm = cap;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairUpdate {
    /// Margin at or below epsilon; the model was not touched.
    Skipped,
    /// `clipped` is set when any of the three deltas hit the norm cap.
    Applied { clipped: bool },
}

/// One SGD step on a single pair's loss term, with snapshot semantics.
pub fn pair_update<T: Scalar>(model: &mut FactorModel<T>, pair: PairSample, step: &PairStep<T>) -> Result<PairUpdate> {
    let m = margin(model, pair)?;
    if !(m > step.epsilon) {
        return Ok(PairUpdate::Skipped);
    }
    let d = model.d();
    let coef = step.gamma * step.alpha / m;

    // Norms of the unclipped deltas: ‖Δu‖ = coef‖V_j − V_k‖, ‖ΔV_j‖ = ‖ΔV_k‖ = coef‖U_i‖.
    let diff_sq: T =
        model.item(pair.preferred).iter().zip(model.item(pair.other)).map(|(&a, &b)| (a - b) * (a - b)).sum();
    let user_norm = norm(model.user(pair.user));
    let cap = step.max_step_norm;
    let clip = |norm: T| if norm > cap { cap / norm } else { T::one() };
    let (user_scale, item_scale) = (clip(coef * diff_sq.sqrt()), clip(coef * user_norm));
    let clipped = user_scale < T::one() || item_scale < T::one();
    let (user_coef, item_coef) = (coef * user_scale, coef * item_scale);

    let (users, items) = model.buffers_mut();
    let (u0, j0, k0) = (pair.user * d, pair.preferred * d, pair.other * d);
    for t in 0..d {
        let u_old = users[u0 + t];
        let (vj, vk) = (items[j0 + t], items[k0 + t]);
        users[u0 + t] = u_old + user_coef * (vj - vk);
        items[j0 + t] = vj + item_coef * u_old;
        items[k0 + t] = vk - item_coef * u_old;
    }
    Ok(PairUpdate::Applied { clipped })
}

/// Counters for one training iteration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationStats<T = f64> {
    pub iter: usize,
    /// Mean pre-update `pair_loss` over visited admissible pairs with a
    /// positive margin; `None` if there were none.
    pub mean_pair_loss: Option<T>,
    pub updates: usize,
    pub skips: usize,
    pub clips: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TrainStats<T = f64> {
    pub iterations: Vec<IterationStats<T>>,
}

impl<T: Scalar> TrainStats<T> {
    pub fn total_updates(&self) -> usize {
        self.iterations.iter().map(|s| s.updates).sum()
    }

    pub fn total_skips(&self) -> usize {
        self.iterations.iter().map(|s| s.skips).sum()
    }

    pub fn total_clips(&self) -> usize {
        self.iterations.iter().map(|s| s.clips).sum()
    }

    /// `iter,mean_pair_loss,updates,skips,clips`, one row per iteration.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["iter", "mean_pair_loss", "updates", "skips", "clips"])?;
        for s in &self.iterations {
            w.write_record([
                s.iter.to_string(),
                s.mean_pair_loss.map(|x| x.to_string()).unwrap_or_default(),
                s.updates.to_string(),
                s.skips.to_string(),
                s.clips.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// What the trainer did with one admissible pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairVisit<T = f64> {
    pub iter: usize,
    pub pair: PairSample,
    /// Pre-update margin.
    pub margin: T,
    pub outcome: PairUpdate,
}

/// Trainer progress, reported to the observer of [`train_ppr_observed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrainEvent<'a, T = f64> {
    /// A user's item sample, sorted by decreasing rating. Emitted before
    /// that user's pairs.
    Sampled {
        iter: usize,
        user: usize,
        items: &'a [(usize, T)],
    },
    Pair(PairVisit<T>),
}

/// Train with the default (silent) observer.
pub fn train_ppr<T: Scalar>(
    train: &RatingMatrix<T>,
    config: &TrainConfig<T>,
) -> Result<(FactorModel<T>, TrainStats<T>)> {
    train_ppr_observed(train, config, |_| {})
}

/// Train, reporting every visited admissible pair to `observer`.
///
/// Factors are drawn once from `config.seed` before the first iteration.
/// Iteration `t` draws its user and item samples from an independent
/// stream of the same seed, so runs are bit-reproducible.
pub fn train_ppr_observed<T: Scalar>(
    train: &RatingMatrix<T>,
    config: &TrainConfig<T>,
    mut observer: impl FnMut(TrainEvent<'_, T>),
) -> Result<(FactorModel<T>, TrainStats<T>)> {
    config.validate()?;
    if train.is_empty() {
        return Err(Error::Empty("training matrix has no ratings"));
    }
    let mut model: FactorModel<T> = init_model(train.n_users(), train.n_items(), config.d, config.seed)?;
    let step = config.step();
    let n_users = train.n_users();
    let users_per_iter = config.user_sample_size.min(n_users);
    let mut stats = TrainStats::default();
    let mut sampled: Vec<(usize, T)> = Vec::with_capacity(config.item_sample_size);

    for iter in 0..config.max_iters {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(iter as u64 + 1);
        let mut it = IterationStats { iter, mean_pair_loss: None, updates: 0, skips: 0, clips: 0 };
        let (mut loss_sum, mut loss_n) = (T::zero(), 0usize);

        for user in index::sample(&mut rng, n_users, users_per_iter) {
            let row = train.user_ratings(user);
            if row.len() < 2 {
                observer(TrainEvent::Sampled { iter, user, items: row });
                continue;
            }
            let take = config.item_sample_size.min(row.len());
            sampled.clear();
            sampled.extend(index::sample(&mut rng, row.len(), take).into_iter().map(|p| row[p]));
            // Decreasing rating, then ascending item index.
            sampled.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            observer(TrainEvent::Sampled { iter, user, items: &sampled });

            for a in 0..sampled.len() {
                for b in a + 1..sampled.len() {
                    if !(sampled[a].1 > sampled[b].1) {
                        continue;
                    }
                    let pair = PairSample { user, preferred: sampled[a].0, other: sampled[b].0 };
                    let m = margin(&model, pair)?;
                    if m > T::zero() {
                        loss_sum = loss_sum - config.alpha * m.ln();
                        loss_n += 1;
                    }
                    let outcome = pair_update(&mut model, pair, &step)?;
                    match outcome {
                        PairUpdate::Skipped => it.skips += 1,
                        PairUpdate::Applied { clipped } => {
                            it.updates += 1;
                            it.clips += clipped as usize;
                        }
                    }
                    observer(TrainEvent::Pair(PairVisit { iter, pair, margin: m, outcome }));
                }
            }
        }
        if loss_n > 0 {
            it.mean_pair_loss = Some(loss_sum / T::of(loss_n as f64));
        }
        stats.iterations.push(it);
    }
    if !model.is_finite() {
        return Err(Error::Diverged { epoch: config.max_iters });
    }
    Ok((model, stats))
}

/// Fraction of within-user test pairs with `R[i][j] > R[i][k]` that the
/// scorer orders the same way. Score ties count one half.
pub fn pairwise_concordance<T: Scalar, S: Scorer<T> + ?Sized>(scorer: &S, test: &RatingMatrix<T>) -> Result<f64> {
    let (mut agree, mut total) = (0.0f64, 0usize);
    let mut scores = Vec::new();
    for user in 0..test.n_users() {
        let row = test.user_ratings(user);
        if row.len() < 2 {
            continue;
        }
        scores.clear();
        for &(item, _) in row {
            scores.push(scorer.score(user, item)?);
        }
        for a in 0..row.len() {
            for b in 0..row.len() {
                if row[a].1 > row[b].1 {
                    total += 1;
                    if scores[a] > scores[b] {
                        agree += 1.0;
                    } else if scores[a] == scores[b] {
                        agree += 0.5;
                    }
                }
            }
        }
    }
    if total == 0 {
        return Err(Error::Degenerate("no admissible test pairs for concordance".into()));
    }
    Ok(agree / total as f64)
}
