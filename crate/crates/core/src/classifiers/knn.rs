use crate::data::{Label, Matrix};

/// K-nearest neighbours with Euclidean distance and majority vote.
///
/// Vote ties go to the label of the single nearest neighbour; distance ties
/// are broken by training-row order.
#[derive(Clone, Debug)]
pub struct Knn {
    k: usize,
    points: Matrix,
    labels: Vec<Label>,
}

impl Knn {
    pub(crate) fn fit(x: &Matrix, y: &[Label], k: usize) -> Self {
        Knn {
            k,
            points: x.clone(),
            labels: y.to_vec(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_stored(&self) -> usize {
        self.points.n_rows()
    }

    pub(crate) fn predict_row(&self, query: &[f64]) -> Label {
        let mut scored: Vec<(f64, usize)> = self
            .points
            .rows()
            .enumerate()
            .map(|(i, p)| {
                let d2: f64 = p.iter().zip(query).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2, i)
            })
            .collect();
        let k = self.k.min(scored.len());
        let by_distance =
            |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < scored.len() {
            scored.select_nth_unstable_by(k - 1, by_distance);
            scored.truncate(k);
        }
        scored.sort_unstable_by(by_distance);

        let pos = scored
            .iter()
            .filter(|&&(_, i)| self.labels[i] == Label::Positive)
            .count();
        let neg = k - pos;
        match pos.cmp(&neg) {
            std::cmp::Ordering::Greater => Label::Positive,
            std::cmp::Ordering::Less => Label::Negative,
            std::cmp::Ordering::Equal => self.labels[scored[0].1],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> (Matrix, Vec<Label>) {
        let x = Matrix::from_rows(&[[0.0, 0.0], [0.1, 0.0], [1.0, 1.0], [0.9, 1.0], [0.5, 0.6]])
            .unwrap();
        let y = vec![
            Label::Negative,
            Label::Negative,
            Label::Positive,
            Label::Positive,
            Label::Positive,
        ];
        (x, y)
    }

    #[test]
    fn stores_every_training_row() {
        let (x, y) = fixture();
        let m = Knn::fit(&x, &y, 5);
        assert_eq!(m.n_stored(), 5);
        assert_eq!(m.k(), 5);
    }

    #[test]
    fn one_neighbour_recovers_training_labels() {
        let (x, y) = fixture();
        let m = Knn::fit(&x, &y, 1);
        for (row, &label) in x.rows().zip(&y) {
            assert_eq!(m.predict_row(row), label);
        }
    }

    #[test]
    fn even_vote_goes_to_nearest() {
        let (x, y) = fixture();
        let m = Knn::fit(&x, &y, 2);
        // nearest is (0.1, 0), second nearest is (0.5, 0.6)
        assert_eq!(m.predict_row(&[0.2, 0.1]), Label::Negative);
    }

    #[test]
    fn k_larger_than_training_set_uses_all_rows() {
        let (x, y) = fixture();
        let m = Knn::fit(&x, &y, 50);
        assert_eq!(m.predict_row(&[0.0, 0.0]), Label::Positive);
    }
}
