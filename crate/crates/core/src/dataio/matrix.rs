use std::collections::HashMap;

use crate::dataio::RatingRecord;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Inclusive bounds of the rating scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatingScale<T = f64> {
    pub min: T,
    pub max: T,
}

impl<T: Scalar> RatingScale<T> {
    pub fn contains(&self, rating: T) -> bool {
        rating >= self.min && rating <= self.max
    }
}

/// Sparse user × item rating store.
///
/// Raw ids are remapped to dense 0-based indices in first-appearance order.
/// Each user's ratings are kept sorted by item index, so a user's items are
/// available in O(items-of-user) and lookups are a binary search.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingMatrix<T = f64> {
    user_ids: Vec<String>,
    item_ids: Vec<String>,
    rows: Vec<Vec<(usize, T)>>,
    scale: RatingScale<T>,
    nnz: usize,
}

impl<T: Scalar> RatingMatrix<T> {
    /// Same id space and scale as `self`, with the given per-user rows.
    pub(crate) fn with_rows(&self, rows: Vec<Vec<(usize, T)>>) -> Self {
        debug_assert_eq!(rows.len(), self.n_users());
        let nnz = rows.iter().map(Vec::len).sum();
        RatingMatrix { user_ids: self.user_ids.clone(), item_ids: self.item_ids.clone(), rows, scale: self.scale, nnz }
    }

    /// Build directly from dense-index triplets. Later duplicates win.
    pub fn from_triplets(
        n_users: usize,
        n_items: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
        scale: Option<RatingScale<T>>,
    ) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); n_users];
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for (u, i, r) in triplets {
            if u >= n_users {
                return Err(Error::IndexOutOfRange { kind: "user", index: u, len: n_users });
            }
            if i >= n_items {
                return Err(Error::IndexOutOfRange { kind: "item", index: i, len: n_items });
            }
            if !r.is_finite() {
                return Err(Error::InvalidParameter(format!("non-finite rating {r}")));
            }
            lo = lo.min(r);
            hi = hi.max(r);
            rows[u].push((i, r));
        }
        for row in &mut rows {
            // Stable sort keeps insertion order among duplicates; keep the last.
            row.sort_by_key(|&(i, _)| i);
            let mut deduped: Vec<(usize, T)> = Vec::with_capacity(row.len());
            for &(i, r) in row.iter() {
                match deduped.last_mut() {
                    Some(last) if last.0 == i => last.1 = r,
                    _ => deduped.push((i, r)),
                }
            }
            *row = deduped;
        }
        let scale = match scale {
            Some(s) => {
                if !(s.min <= s.max) {
                    return Err(Error::InvalidParameter(format!("rating scale min {} exceeds max {}", s.min, s.max)));
                }
                if let Some(r) = rows.iter().flatten().map(|e| e.1).find(|&r| !s.contains(r)) {
                    return Err(Error::OutOfScale { rating: r.as_f64(), min: s.min.as_f64(), max: s.max.as_f64() });
                }
                s
            }
            None if lo <= hi => RatingScale { min: lo, max: hi },
            None => return Err(Error::Empty("no ratings to infer a scale from")),
        };
        let nnz = rows.iter().map(Vec::len).sum();
        Ok(RatingMatrix {
            user_ids: (0..n_users).map(|u| u.to_string()).collect(),
            item_ids: (0..n_items).map(|i| i.to_string()).collect(),
            rows,
            scale,
            nnz,
        })
    }

    pub fn n_users(&self) -> usize {
        self.user_ids.len()
    }

    pub fn n_items(&self) -> usize {
        self.item_ids.len()
    }

    /// Number of stored ratings.
    pub fn nnz(&self) -> usize {
        self.nnz
    }

    pub fn is_empty(&self) -> bool {
        self.nnz == 0
    }

    pub fn scale(&self) -> RatingScale<T> {
        self.scale
    }

    pub fn user_id(&self, user: usize) -> &str {
        &self.user_ids[user]
    }

    pub fn item_id(&self, item: usize) -> &str {
        &self.item_ids[item]
    }

    /// `(item, rating)` pairs of one user, ascending by item index.
    pub fn user_ratings(&self, user: usize) -> &[(usize, T)] {
        &self.rows[user]
    }

    pub fn get(&self, user: usize, item: usize) -> Option<T> {
        let row = self.rows.get(user)?;
        row.binary_search_by_key(&item, |&(i, _)| i).ok().map(|pos| row[pos].1)
    }

    pub fn contains(&self, user: usize, item: usize) -> bool {
        self.get(user, item).is_some()
    }

    /// All entries as `(user, item, rating)`, user-major then item-ascending.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.rows.iter().enumerate().flat_map(|(u, row)| row.iter().map(move |&(i, r)| (u, i, r)))
    }

    /// Number of ratings each item received.
    pub fn item_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_items()];
        for (_, i, _) in self.entries() {
            counts[i] += 1;
        }
        counts
    }
}

/// Build a rating matrix from parsed records.
///
/// Duplicate `(user, item)` pairs keep the last record. Without a declared
/// scale the observed `(min, max)` is used.
pub fn build_matrix<T: Scalar>(records: &[RatingRecord], scale: Option<(f64, f64)>) -> Result<RatingMatrix<T>> {
    if records.is_empty() {
        return Err(Error::Empty("no rating records"));
    }
    if let Some((min, max)) = scale {
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidParameter(format!("invalid rating scale ({min}, {max})")));
        }
        if let Some(r) = records.iter().find(|r| r.rating < min || r.rating > max) {
            return Err(Error::OutOfScale { rating: r.rating, min, max });
        }
    }

    let mut user_index: HashMap<&str, usize> = HashMap::new();
    let mut item_index: HashMap<&str, usize> = HashMap::new();
    let mut user_ids = Vec::new();
    let mut item_ids = Vec::new();
    let mut triplets = Vec::with_capacity(records.len());
    for rec in records {
        if rec.user_id.is_empty() || rec.item_id.is_empty() {
            return Err(Error::InvalidParameter("record with empty user or item id".into()));
        }
        let u = *user_index.entry(&rec.user_id).or_insert_with(|| {
            user_ids.push(rec.user_id.clone());
            user_ids.len() - 1
        });
        let i = *item_index.entry(&rec.item_id).or_insert_with(|| {
            item_ids.push(rec.item_id.clone());
            item_ids.len() - 1
        });
        triplets.push((u, i, T::of(rec.rating)));
    }

    let declared = scale.map(|(min, max)| RatingScale { min: T::of(min), max: T::of(max) });
    let mut matrix = RatingMatrix::from_triplets(user_ids.len(), item_ids.len(), triplets, declared)?;
    matrix.user_ids = user_ids;
    matrix.item_ids = item_ids;
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(u: &str, i: &str, r: f64) -> RatingRecord {
        RatingRecord { user_id: u.into(), item_id: i.into(), rating: r, timestamp: None }
    }

    #[test]
    fn counts_users_items_entries() {
        let m: RatingMatrix =
            build_matrix(&[rec("a", "x", 1.0), rec("a", "y", 2.0), rec("b", "x", 3.0)], None).unwrap();
        assert_eq!((m.n_users(), m.n_items(), m.nnz()), (2, 2, 3));
        assert_eq!(m.user_id(1), "b");
        assert_eq!(m.item_id(1), "y");
    }

    #[test]
    fn duplicates_keep_last() {
        let m: RatingMatrix = build_matrix(&[rec("u", "i", 3.0), rec("u", "i", 5.0)], None).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 0), Some(5.0));
    }

    #[test]
    fn observed_scale() {
        let recs: Vec<_> = (1..=5).map(|r| rec("u", &r.to_string(), r as f64)).collect();
        let m: RatingMatrix = build_matrix(&recs, None).unwrap();
        assert_eq!(m.scale(), RatingScale { min: 1.0, max: 5.0 });
    }

    #[test]
    fn empty_and_out_of_scale() {
        assert!(matches!(build_matrix::<f64>(&[], None), Err(Error::Empty(_))));
        let err = build_matrix::<f64>(&[rec("u", "i", 6.0)], Some((1.0, 5.0))).unwrap_err();
        assert!(matches!(err, Error::OutOfScale { .. }));
    }

    #[test]
    fn first_appearance_order_and_sorted_rows() {
        let m: RatingMatrix<f32> =
            build_matrix(&[rec("9", "z", 1.0), rec("3", "a", 2.0), rec("9", "a", 4.0)], Some((1.0, 5.0))).unwrap();
        assert_eq!(m.user_id(0), "9");
        assert_eq!(m.user_ratings(0), &[(0, 1.0), (1, 4.0)]);
        assert_eq!(m.item_counts(), vec![1, 2]);
        let entries: Vec<_> = m.entries().collect();
        assert_eq!(entries, vec![(0, 0, 1.0), (0, 1, 4.0), (1, 1, 2.0)]);
    }

    #[test]
    fn triplet_index_checks() {
        assert!(RatingMatrix::<f64>::from_triplets(1, 1, [(1, 0, 1.0)], None).is_err());
        assert!(RatingMatrix::<f64>::from_triplets(1, 1, [(0, 1, 1.0)], None).is_err());
    }
}
