use proptest::prelude::*;

use shapeseq::seqalign::{align_score, AlignParams, FastScorer, Score, Symbol, SymbolString};
use shapeseq::shape_context::{match_cost, Histogram};
use shapeseq::{Contour, Point};

fn symbol_string(max: usize) -> impl Strategy<Value = SymbolString> {
    prop::collection::vec(prop::sample::select(Symbol::ALL.to_vec()), 0..=max)
        .prop_map(SymbolString::new)
}

fn histogram_pair() -> impl Strategy<Value = (Histogram, Histogram)> {
    (1usize..24).prop_flat_map(|n| {
        (
            prop::collection::vec(0u32..6, n).prop_map(Histogram::new),
            prop::collection::vec(0u32..6, n).prop_map(Histogram::new),
        )
    })
}

proptest! {
    #[test]
    fn alignment_is_symmetric(a in symbol_string(12), b in symbol_string(12)) {
        let p = AlignParams::default();
        prop_assert_eq!(align_score(&a, &b, &p).score, align_score(&b, &a, &p).score);
    }

    #[test]
    fn fast_scorer_matches_rational_table(a in symbol_string(30), b in symbol_string(30)) {
        let p = AlignParams::default();
        let fast = FastScorer::new(&p).unwrap();
        prop_assert_eq!(fast.score(&a, &b), align_score(&a, &b, &p).score);
    }

    #[test]
    fn self_alignment_dominates(a in symbol_string(15), b in symbol_string(15)) {
        let p = AlignParams::default();
        let own = align_score(&a, &a, &p).score;
        prop_assert_eq!(own, Score::from_integer(2 * a.len() as i64));
        prop_assert!(align_score(&a, &b, &p).score <= own);
    }

    #[test]
    fn aligned_strings_drop_only_gaps(a in symbol_string(10), b in symbol_string(10)) {
        let r = align_score(&a, &b, &AlignParams::default());
        prop_assert_eq!(r.aligned_s1.len(), r.aligned_s2.len());
        prop_assert_eq!(r.aligned_s1.replace('-', ""), a.to_string());
        prop_assert_eq!(r.aligned_s2.replace('-', ""), b.to_string());
    }

    #[test]
    fn symbol_strings_round_trip(a in symbol_string(40)) {
        prop_assert_eq!(a.to_string().parse::<SymbolString>().unwrap(), a);
    }

    #[test]
    fn match_cost_is_a_bounded_symmetric_distance((g, h) in histogram_pair()) {
        let (gh, hg) = (match_cost(&g, &h), match_cost(&h, &g));
        match (gh, hg) {
            (Ok(x), Ok(y)) => {
                prop_assert_eq!(x, y);
                prop_assert!((0.0..=1.0).contains(&x));
                prop_assert_eq!(x == 0.0, g.normalized() == h.normalized());
            }
            (x, y) => prop_assert_eq!(x.is_err(), y.is_err()),
        }
    }

    #[test]
    fn contour_text_round_trips(pts in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 3..20)) {
        if let Ok(c) = Contour::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()) {
            prop_assert_eq!(c.to_text().parse::<Contour>().unwrap(), c);
        }
    }
}
