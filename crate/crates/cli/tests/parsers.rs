use mzl_cli::doc::{decode_document, parse_rational};
use mzl_cli::range::{parse_even_range, parse_int_range, MAX_RANGE_LEN};
use proptest::prelude::*;
use rug::Rational;

proptest! {
    #[test]
    fn int_range_roundtrip(lo in -10_000i64..10_000, len in 0i64..500) {
        let r = parse_int_range(&format!("{lo}..{}", lo + len)).unwrap();
        let v: Vec<i64> = r.iter().collect();
        prop_assert_eq!(v.len() as u64, r.len());
        prop_assert_eq!(v.first().copied(), Some(lo));
        prop_assert_eq!(v.last().copied(), Some(lo + len));
    }

    #[test]
    fn even_range_is_even(lo in -5_000i64..5_000, len in 0i64..300) {
        let (a, b) = (2 * lo, 2 * (lo + len));
        let r = parse_even_range(&format!("{a}..{b}")).unwrap();
        prop_assert!(r.iter().all(|k| k % 2 == 0));
        prop_assert_eq!(r.iter().count() as i64, len + 1);
    }

    #[test]
    fn range_parsers_total(s in "\\PC{0,24}") {
        if let Ok(r) = parse_int_range(&s) {
            prop_assert!(r.lo <= r.hi && r.len() <= MAX_RANGE_LEN);
        }
        let _ = parse_even_range(&s);
    }

    #[test]
    fn rational_roundtrip(n in any::<i64>(), d in 1u64..u64::MAX) {
        let q = Rational::from((n, d));
        prop_assert_eq!(parse_rational(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn decoder_total(s in "\\PC{0,200}") {
        let _ = decode_document(&s);
    }
}
