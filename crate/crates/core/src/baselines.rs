//! Comparison algorithms: random placement, Zipf (popularity) placement and
//! classic matrix factorization. All of them implement [`Scorer`].

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataio::RatingMatrix;
use crate::error::{Error, Result};
use crate::model::{init_model, FactorModel, Scorer};
use crate::scalar::{dot, Scalar};

/// Items ranked by training rating count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopularityTable {
    counts: Vec<usize>,
    /// Item indices, most popular first.
    order: Vec<usize>,
    /// 1-based rank of each item.
    ranks: Vec<usize>,
}

impl PopularityTable {
    /// Descending count; equal counts rank the lower index first.
    pub fn from_counts(counts: Vec<usize>) -> Self {
        let mut order: Vec<usize> = (0..counts.len()).collect();
        order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
        let mut ranks = vec![0; counts.len()];
        for (pos, &item) in order.iter().enumerate() {
            ranks[item] = pos + 1;
        }
        PopularityTable { counts, order, ranks }
    }

    pub fn from_matrix<T: Scalar>(train: &RatingMatrix<T>) -> Self {
        Self::from_counts(train.item_counts())
    }

    pub fn count(&self, item: usize) -> usize {
        self.counts[item]
    }

    pub fn rank(&self, item: usize) -> usize {
        self.ranks[item]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn n_items(&self) -> usize {
        self.counts.len()
    }
}

/// Recommends at random: each (user, item) gets a fixed pseudo-random score
/// in (0, 1) derived from `(seed, user, item)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomScorer {
    n_users: usize,
    n_items: usize,
    seed: u64,
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

pub fn random_scorer(n_users: usize, n_items: usize, seed: u64) -> RandomScorer {
    RandomScorer { n_users, n_items, seed }
}

impl RandomScorer {
    fn bits(&self, user: usize, item: usize) -> u64 {
        let h = mix64(self.seed.wrapping_add(GOLDEN));
        let h = mix64(h ^ (user as u64).wrapping_mul(GOLDEN));
        mix64(h ^ (item as u64).wrapping_add(GOLDEN).wrapping_mul(0xd6e8_feb8_6659_fd93))
    }
}

impl<T: Scalar> Scorer<T> for RandomScorer {
    fn n_users(&self) -> usize {
        self.n_users
    }

    fn n_items(&self) -> usize {
        self.n_items
    }

    fn score(&self, user: usize, item: usize) -> Result<T> {
        Scorer::<T>::check_indices(self, user, item)?;
        Ok(T::open01_from_bits(self.bits(user, item)))
    }
}

/// Popularity placement: every user scores item `j` as `1 / rank(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZipfScorer {
    n_users: usize,
    popularity: PopularityTable,
}

pub fn zipf_scorer(n_users: usize, popularity: PopularityTable) -> ZipfScorer {
    ZipfScorer { n_users, popularity }
}

impl ZipfScorer {
    pub fn popularity(&self) -> &PopularityTable {
        &self.popularity
    }
}

impl<T: Scalar> Scorer<T> for ZipfScorer {
    fn n_users(&self) -> usize {
        self.n_users
    }

    fn n_items(&self) -> usize {
        self.popularity.n_items()
    }

    fn score(&self, user: usize, item: usize) -> Result<T> {
        Scorer::<T>::check_indices(self, user, item)?;
        Ok(T::one() / T::of(self.popularity.rank(item) as f64))
    }
}

/// Hyperparameters for [`train_classic_mf`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MfConfig<T = f64> {
    pub d: usize,
    pub gamma: T,
    pub lambda: T,
    pub epochs: usize,
    pub seed: u64,
}

impl<T: Scalar> Default for MfConfig<T> {
    fn default() -> Self {
        MfConfig { d: 10, gamma: T::of(0.005), lambda: T::of(0.01), epochs: 30, seed: 0 }
    }
}

/// `Σ (R − U_i·V_j)² + λ(‖U‖² + ‖V‖²)` over the training entries.
pub fn mf_objective<T: Scalar>(model: &FactorModel<T>, train: &RatingMatrix<T>, lambda: T) -> T {
    let sse: T = train
        .entries()
        .map(|(u, i, r)| {
            let e = r - dot(model.user(u), model.item(i));
            e * e
        })
        .sum();
    let reg = dot(model.users(), model.users()) + dot(model.items(), model.items());
    sse + lambda * reg
}

/// Objective value after each epoch.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MfStats<T = f64> {
    pub epoch_objective: Vec<T>,
}

impl<T: Scalar> MfStats<T> {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["epoch", "objective"])?;
        for (epoch, v) in self.epoch_objective.iter().enumerate() {
            w.write_record([epoch.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Squared-error matrix factorization trained by per-entry SGD.
///
/// Factors start from the same Uniform(0, 1) draw as [`init_model`]. Each
/// epoch visits the entries in a fresh seeded shuffle.
pub fn train_classic_mf<T: Scalar>(
    train: &RatingMatrix<T>,
    config: &MfConfig<T>,
) -> Result<(FactorModel<T>, MfStats<T>)> {
    if train.is_empty() {
        return Err(Error::Empty("training matrix has no ratings"));
    }
    if !(config.gamma >= T::zero()) || !(config.lambda >= T::zero()) {
        return Err(Error::InvalidParameter("gamma and lambda must be non-negative".into()));
    }
    let mut model: FactorModel<T> = init_model(train.n_users(), train.n_items(), config.d, config.seed)?;
    let mut entries: Vec<(usize, usize, T)> = train.entries().collect();
    let d = config.d;
    let mut stats = MfStats::default();
    let mut user_old = vec![T::zero(); d];
    let mut item_old = vec![T::zero(); d];

    for epoch in 0..config.epochs {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(epoch as u64 + 1);
        entries.shuffle(&mut rng);
        for &(u, i, r) in &entries {
            let e = r - dot(model.user(u), model.item(i));
            user_old.copy_from_slice(model.user(u));
            item_old.copy_from_slice(model.item(i));
            for (x, &v) in model.user_mut(u).iter_mut().zip(&item_old) {
                *x = *x + config.gamma * (e * v - config.lambda * *x);
            }
            for (x, &uo) in model.item_mut(i).iter_mut().zip(&user_old) {
                *x = *x + config.gamma * (e * uo - config.lambda * *x);
            }
        }
        let objective = mf_objective(&model, train, config.lambda);
        if !objective.is_finite() || !model.is_finite() {
            return Err(Error::Diverged { epoch });
        }
        stats.epoch_objective.push(objective);
    }
    Ok((model, stats))
}
