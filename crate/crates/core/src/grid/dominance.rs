//! Pareto dominance filtering over minimization-sense objective triples.

/// `a` dominates `b` when it is no worse everywhere and strictly better
/// somewhere (componentwise minimization).
pub fn dominates(a: &[f64; 3], b: &[f64; 3]) -> bool {
    let mut strictly = false;
    for k in 0..3 {
        if a[k] > b[k] {
            return false;
        }
        if a[k] < b[k] {
            strictly = true;
        }
    }
    strictly
}

/// Keep-mask of the maximal antichain: a point is dropped exactly when some
/// other point dominates it. Exact duplicates do not dominate each other
/// and are all kept.
pub fn non_dominated_mask(points: &[[f64; 3]]) -> Vec<bool> {
    let n = points.len();
    let mut keep = vec![true; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && dominates(&points[j], &points[i]) {
                keep[i] = false;
                break;
            }
        }
    }
    keep
}

/// Filter a list of carriers by dominance of their objective triples.
pub fn filter_dominated<T>(items: Vec<T>, key: impl Fn(&T) -> [f64; 3]) -> Vec<T> {
    let points: Vec<[f64; 3]> = items.iter().map(&key).collect();
    let keep = non_dominated_mask(&points);
    items
        .into_iter()
        .zip(keep)
        .filter_map(|(item, k)| if k { Some(item) } else { None })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominated_point_removed() {
        let pts = vec![[1.0, 1.0, 1.0], [2.0, 2.0, 2.0]];
        assert_eq!(non_dominated_mask(&pts), vec![true, false]);
    }

    #[test]
    fn incomparable_points_kept() {
        let pts = vec![[1.0, 2.0, 3.0], [3.0, 2.0, 1.0]];
        assert_eq!(non_dominated_mask(&pts), vec![true, true]);
    }

    #[test]
    fn duplicates_survive() {
        let pts = vec![[1.0, 1.0, 1.0], [1.0, 1.0, 1.0]];
        assert_eq!(non_dominated_mask(&pts), vec![true, true]);
    }
}
