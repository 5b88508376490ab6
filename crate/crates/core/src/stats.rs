//! Summary metrics over detection results.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::model::VariationalGroup;

/// Group counts keyed by number of extension points (0 for exact groups).
pub type Histogram = BTreeMap<usize, usize>;

pub fn compute_histogram(groups: &[VariationalGroup]) -> Histogram {
    let mut hist = Histogram::new();
    for g in groups {
        *hist.entry(g.extension_points()).or_default() += 1;
    }
    hist
}

/// Share of the document's symbols inside at least one duplicate fragment.
/// Extension point values are variable text and do not count.
pub fn compute_coverage(doc_len: usize, groups: &[VariationalGroup]) -> Ratio<u64> {
    if doc_len == 0 {
        return Ratio::from_integer(0);
    }
    let mut spans: Vec<(usize, usize)> =
        groups.iter().flat_map(|g| g.parts()).flat_map(|p| p.occurrences()).map(|f| (f.begin(), f.end())).collect();
    spans.sort_unstable();

    let mut covered = 0usize;
    let mut open: Option<(usize, usize)> = None;
    for (b, e) in spans {
        match open {
            Some((ob, oe)) if b <= oe + 1 => open = Some((ob, oe.max(e))),
            Some((ob, oe)) => {
                covered += oe - ob + 1;
                open = Some((b, e));
            }
            None => open = Some((b, e)),
        }
    }
    if let Some((ob, oe)) = open {
        covered += oe - ob + 1;
    }
    Ratio::new(covered.min(doc_len) as u64, doc_len as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::DocId;
    use crate::model::{ExactGroup, TextFragment};
    use alloc::vec;

    fn group(spans: &[(usize, usize)]) -> ExactGroup {
        ExactGroup::new("x", spans.iter().map(|&(b, e)| TextFragment::new(DocId(0), b, e).unwrap()).collect()).unwrap()
    }

    #[test]
    fn histogram_by_arity() {
        let exact: VariationalGroup = group(&[(1, 2), (10, 11)]).into();
        let pair = VariationalGroup::new(vec![group(&[(1, 2), (10, 11)]), group(&[(4, 5), (13, 14)])]).unwrap();
        let hist = compute_histogram(&[exact.clone(), exact, pair]);
        assert_eq!(hist, Histogram::from([(0, 2), (1, 1)]));
        assert!(compute_histogram(&[]).is_empty());

        let parts = (0..4).map(|i| group(&[(1 + 3 * i, 2 + 3 * i), (21 + 3 * i, 22 + 3 * i)])).collect();
        let four = VariationalGroup::new(parts).unwrap();
        assert_eq!(compute_histogram(&[four]), Histogram::from([(3, 1)]));
    }

    #[test]
    fn coverage_of_union() {
        assert_eq!(compute_coverage(0, &[]), Ratio::from_integer(0));
        assert_eq!(compute_coverage(100, &[]), Ratio::from_integer(0));
        assert_eq!(compute_coverage(100, &[group(&[(1, 10), (51, 60)]).into()]), Ratio::new(1, 5));
        let whole = group(&[(1, 50), (51, 100)]).into();
        assert_eq!(compute_coverage(100, &[whole]), Ratio::from_integer(1));
        // overlapping fragments from different groups count once
        let a = group(&[(1, 10), (51, 60)]).into();
        let b = group(&[(5, 14), (70, 79)]).into();
        assert_eq!(compute_coverage(100, &[a, b]), Ratio::new(34, 100));
    }
}
