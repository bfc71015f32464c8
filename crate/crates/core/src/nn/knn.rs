//! k-nearest-neighbour classification under Euclidean distance.

use rayon::prelude::*;

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Majority label among the `k` nearest training rows.
///
/// `k` is clamped to the training size. Equal distances keep the lower
/// training index; a tied vote goes to the smaller label.
pub fn knn_classify<T: Scalar>(train: &LabeledDataset<T>, query: &[T], k: usize) -> Result<usize> {
    if train.is_empty() {
        return Err(Error::data("KNN training set is empty"));
    }
    if k == 0 {
        return Err(Error::config("k must be at least 1"));
    }
    if query.len() != train.n_features() {
        return Err(Error::Shape {
            expected: train.n_features(),
            found: query.len(),
        });
    }
    let mut dist: Vec<(T, usize)> = train
        .rows()
        .enumerate()
        .map(|(i, row)| {
            let d: T = row.iter().zip(query).map(|(&a, &b)| (a - b) * (a - b)).sum();
            (d, i)
        })
        .collect();
    let k = k.min(dist.len());
    dist.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
    });
    let mut votes = vec![0usize; train.n_classes()];
    for &(_, i) in &dist[..k] {
        votes[train.labels()[i]] += 1;
    }
    let best = votes.iter().copied().max().unwrap_or(0);
    Ok(votes.iter().position(|&v| v == best).unwrap_or(0))
}

/// Classifies every row of `data`; queries run in parallel.
pub fn knn_predict<T: Scalar>(train: &LabeledDataset<T>, data: &LabeledDataset<T>, k: usize) -> Result<Vec<usize>> {
    let rows: Vec<&[T]> = data.rows().collect();
    rows.par_iter().map(|q| knn_classify(train, q, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn train() -> LabeledDataset<f64> {
        LabeledDataset::unnamed(vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 5.0, 5.0], 2, vec![0, 1, 1, 2], 3).unwrap()
    }

    #[test]
    fn nearest_neighbour() {
        assert_eq!(knn_classify(&train(), &[4.0, 4.5], 1).unwrap(), 2);
        assert_eq!(knn_classify(&train(), &[0.1, 0.0], 1).unwrap(), 0);
    }

    #[test]
    fn equal_distance_prefers_lower_index() {
        // (0,0) and (1,0) are both 0.5 away
        assert_eq!(knn_classify(&train(), &[0.5, 0.0], 1).unwrap(), 0);
    }

    #[test]
    fn vote_tie_goes_to_smaller_label() {
        let t = LabeledDataset::unnamed(vec![0.0, 1.0], 1, vec![1, 0], 2).unwrap();
        assert_eq!(knn_classify(&t, &[0.2], 2).unwrap(), 0);
    }

    #[test]
    fn oversized_k_is_clamped() {
        assert_eq!(knn_classify(&train(), &[9.0, 9.0], 50).unwrap(), 1);
    }

    #[test]
    fn errors() {
        assert!(knn_classify(&train(), &[0.0], 1).is_err());
        assert!(knn_classify(&train(), &[0.0, 0.0], 0).is_err());
    }
}
