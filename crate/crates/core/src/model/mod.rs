//! Latent factor model, the shared scorer contract, and top-K generation.

mod artifact;

pub use artifact::{read_artifact, write_artifact, ModelHeader};

use std::cmp::Ordering;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataio::{RatingMatrix, RatingScale};
use crate::error::{Error, Result};
use crate::scalar::{dot, Scalar};

/// Anything that assigns a real-valued affinity to a (user, item) pair.
///
/// Every algorithm is evaluated through this one trait, so scaling, top-K
/// and the metrics never special-case an algorithm.
pub trait Scorer<T: Scalar>: Sync {
    fn n_users(&self) -> usize;
    fn n_items(&self) -> usize;

    /// Score for one pair; errors on out-of-range indices.
    fn score(&self, user: usize, item: usize) -> Result<T>;

    fn check_indices(&self, user: usize, item: usize) -> Result<()> {
        if user >= self.n_users() {
            return Err(Error::IndexOutOfRange { kind: "user", index: user, len: self.n_users() });
        }
        if item >= self.n_items() {
            return Err(Error::IndexOutOfRange { kind: "item", index: item, len: self.n_items() });
        }
        Ok(())
    }
}

/// User factors `U` (`n_users × d`) and item factors `V` (`n_items × d`),
/// both stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorModel<T = f64> {
    d: usize,
    users: Vec<T>,
    items: Vec<T>,
}

impl<T: Scalar> FactorModel<T> {
    pub fn from_rows(d: usize, users: Vec<T>, items: Vec<T>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("latent rank d must be at least 1".into()));
        }
        if !users.len().is_multiple_of(d) || !items.len().is_multiple_of(d) {
            return Err(Error::InvalidParameter(format!(
                "factor buffers ({}, {}) are not multiples of d = {d}",
                users.len(),
                items.len()
            )));
        }
        if users.is_empty() || items.is_empty() {
            return Err(Error::Empty("factor model needs at least one user and one item"));
        }
        Ok(FactorModel { d, users, items })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_users(&self) -> usize {
        self.users.len() / self.d
    }

    pub fn n_items(&self) -> usize {
        self.items.len() / self.d
    }

    pub fn user(&self, user: usize) -> &[T] {
        &self.users[user * self.d..(user + 1) * self.d]
    }

    pub fn item(&self, item: usize) -> &[T] {
        &self.items[item * self.d..(item + 1) * self.d]
    }

    pub fn user_mut(&mut self, user: usize) -> &mut [T] {
        &mut self.users[user * self.d..(user + 1) * self.d]
    }

    pub fn item_mut(&mut self, item: usize) -> &mut [T] {
        &mut self.items[item * self.d..(item + 1) * self.d]
    }

    pub fn users(&self) -> &[T] {
        &self.users
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    /// Both factor buffers at once, for updates touching a user row and
    /// item rows together.
    pub(crate) fn buffers_mut(&mut self) -> (&mut [T], &mut [T]) {
        (&mut self.users, &mut self.items)
    }

    pub fn is_finite(&self) -> bool {
        self.users.iter().chain(&self.items).all(|x| x.is_finite())
    }

    /// Raw dot product `U_user · V_item`.
    pub fn score(&self, user: usize, item: usize) -> Result<T> {
        self.check_indices(user, item)?;
        Ok(dot(self.user(user), self.item(item)))
    }
}

impl<T: Scalar> Scorer<T> for FactorModel<T> {
    fn n_users(&self) -> usize {
        FactorModel::n_users(self)
    }

    fn n_items(&self) -> usize {
        FactorModel::n_items(self)
    }

    fn score(&self, user: usize, item: usize) -> Result<T> {
        FactorModel::score(self, user, item)
    }
}

/// Draw every factor i.i.d. from Uniform(0, 1) with a seeded generator.
/// `U` is filled first, then `V`.
pub fn init_model<T: Scalar>(n_users: usize, n_items: usize, d: usize, seed: u64) -> Result<FactorModel<T>> {
    if n_users == 0 || n_items == 0 {
        return Err(Error::Empty("cannot initialise a model with zero users or items"));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("latent rank d must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |len: usize| -> Vec<T> { (0..len).map(|_| T::open01_from_bits(rng.next_u64())).collect() };
    let users = draw(n_users * d);
    let items = draw(n_items * d);
    FactorModel::from_rows(d, users, items)
}

/// Affine min-max map of a score batch onto the rating scale.
///
/// A constant batch maps every score to the scale midpoint.
pub fn scale_scores<T: Scalar>(raw: &[T], scale: RatingScale<T>) -> Result<Vec<T>> {
    if raw.is_empty() {
        return Err(Error::Empty("no scores to scale"));
    }
    if !(scale.min < scale.max) {
        return Err(Error::InvalidParameter(format!("degenerate rating scale [{}, {}]", scale.min, scale.max)));
    }
    let (lo, hi) = raw.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter("non-finite score in batch".into()));
    }
    let span = scale.max - scale.min;
    if hi == lo {
        let mid = scale.min + span / T::of(2.0);
        return Ok(vec![mid; raw.len()]);
    }
    Ok(raw.iter().map(|&x| (scale.min + (x - lo) / (hi - lo) * span).max(scale.min).min(scale.max)).collect())
}

/// Per-user ranked lists of `(item, score)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecommendationSet<T = f64> {
    pub k: usize,
    pub lists: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> RecommendationSet<T> {
    /// How many lists each item appears in.
    pub fn item_frequencies(&self, n_items: usize) -> Result<Vec<usize>> {
        let mut counts = vec![0usize; n_items];
        for &(item, _) in self.lists.iter().flatten() {
            *counts.get_mut(item).ok_or(Error::IndexOutOfRange { kind: "item", index: item, len: n_items })? += 1;
        }
        Ok(counts)
    }
}

/// Descending score, ascending index on ties.
fn rank_order<T: Scalar>(a: &(usize, T), b: &(usize, T)) -> Ordering {
    b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0))
}

/// The `k` best-scoring items per user among items that user did not rate
/// in `train`.
pub fn top_k<T: Scalar, S: Scorer<T> + ?Sized>(
    scorer: &S,
    train: &RatingMatrix<T>,
    k: usize,
) -> Result<RecommendationSet<T>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if scorer.n_users() != train.n_users() || scorer.n_items() != train.n_items() {
        return Err(Error::ShapeMismatch {
            model_users: scorer.n_users(),
            model_items: scorer.n_items(),
            data_users: train.n_users(),
            data_items: train.n_items(),
        });
    }
    let mut lists = Vec::with_capacity(train.n_users());
    let mut candidates = Vec::with_capacity(train.n_items());
    for user in 0..train.n_users() {
        candidates.clear();
        let mut rated = train.user_ratings(user).iter().map(|&(i, _)| i).peekable();
        for item in 0..train.n_items() {
            if rated.peek() == Some(&item) {
                rated.next();
                continue;
            }
            candidates.push((item, scorer.score(user, item)?));
        }
        if candidates.len() > k {
            candidates.select_nth_unstable_by(k - 1, rank_order);
            candidates.truncate(k);
        }
        candidates.sort_unstable_by(rank_order);
        lists.push(candidates.clone());
    }
    Ok(RecommendationSet { k, lists })
}
