use cospan_core::decompose::HomologyBasis;
use cospan_core::io::{parse_cospan, print_cospan};
use cospan_core::sample::{random_cospan, random_summand, shuffle_generators, KINDS};
use cospan_core::{
    bottleneck, decompose, standard_summand, Diagram, Field, FilteredCospan, Homeomorphism,
    Rational, Strip, StripPoint, Summand,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lambda() -> Rational {
    Rational::from_integer(2.into())
}

fn field_of(i: u8) -> Field {
    [Field::Prime(2), Field::Prime(5), Field::Rational][i as usize % 3]
}

fn cospan(seed: u64, field: u8) -> FilteredCospan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_cospan(field_of(field), &lambda(), 12, &mut rng).unwrap()
}

fn summands(seed: u64, n: usize) -> Vec<Summand> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| random_summand(KINDS[rng.random_range(0..KINDS.len())], &lambda(), &mut rng))
        .collect()
}

fn point(seed: u64) -> StripPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = |rng: &mut ChaCha8Rng| Rational::new(rng.random_range(-15..=15).into(), 8.into());
    // inside the strip: |x + y| <= 4
    loop {
        let (x, y) = (q(&mut rng), q(&mut rng));
        let p = StripPoint::new(x, y);
        if Strip::new(&lambda()).contains(&p) {
            return Strip::new(&lambda()).t(&p, rng.random_range(-1..=1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposing_a_decomposition_changes_nothing(seed in any::<u64>(), f in 0u8..3) {
        let c = cospan(seed, f);
        let d = decompose(&c).unwrap();
        let parts: Vec<FilteredCospan> = d
            .summands
            .iter()
            .map(|s| standard_summand(s, c.field(), &lambda()).unwrap())
            .collect();
        let sum = FilteredCospan::direct_sum(c.field(), &lambda(), &parts).unwrap();
        prop_assert_eq!(decompose(&sum).unwrap().summands, d.summands);
    }

    #[test]
    fn generator_order_is_irrelevant(seed in any::<u64>(), f in 0u8..3) {
        let c = cospan(seed, f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let p = shuffle_generators(&c, &mut rng);
        prop_assert_eq!(decompose(&p).unwrap().summands, decompose(&c).unwrap().summands);
    }

    #[test]
    fn middle_homology_is_counted_by_summands(seed in any::<u64>(), f in 0u8..3) {
        let c = cospan(seed, f);
        let d = decompose(&c).unwrap();
        let (lo, hi) = c.degree_range();
        let (mut chains, mut homology) = (0i64, 0i64);
        for k in lo..=hi {
            let h = HomologyBasis::new(c.mid(), k).dim();
            let sign = if k % 2 == 0 { 1 } else { -1 };
            chains += sign * c.mid().dim(k) as i64;
            homology += sign * h as i64;
            let counted = d
                .summands
                .iter()
                .filter(|s| s.degree() == k && matches!(s.kind(), "GT" | "NE" | "SE" | "Box"))
                .count();
            prop_assert_eq!(counted, h, "degree {}", k);
        }
        prop_assert_eq!(chains, homology);
    }

    #[test]
    fn printed_cospans_decompose_alike(seed in any::<u64>(), f in 0u8..3) {
        let c = cospan(seed, f);
        let back = parse_cospan(&print_cospan(&c)).unwrap();
        prop_assert_eq!(decompose(&back).unwrap().summands, decompose(&c).unwrap().summands);
    }

    #[test]
    fn bottleneck_is_a_pseudometric(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), n in 0usize..4) {
        let phi = Homeomorphism::arctan(&lambda());
        let kinds_of = |seed: u64| -> Vec<Summand> {
            // same kinds and degrees as the first diagram, so distances are mostly finite
            let base = summands(a, n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            base.iter()
                .map(|s| random_summand(s.kind(), &lambda(), &mut rng).with_degree(s.degree()))
                .collect()
        };
        let d1 = Diagram::from_summands(&summands(a, n), &lambda());
        let d2 = Diagram::from_summands(&kinds_of(b), &lambda());
        let d3 = Diagram::from_summands(&kinds_of(c), &lambda());
        let dist = |x: &Diagram, y: &Diagram| bottleneck(x, y, &phi).unwrap().0;
        prop_assert_eq!(dist(&d1, &d1), 0.0);
        let (ab, ba) = (dist(&d1, &d2), dist(&d2, &d1));
        prop_assert!(ab == ba || (ab - ba).abs() < 1e-12, "{} vs {}", ab, ba);
        let (bc, ac) = (dist(&d2, &d3), dist(&d1, &d3));
        prop_assert!(ac <= ab + bc + 1e-9, "{} > {} + {}", ac, ab, bc);
    }

    #[test]
    fn point_distance_is_a_flow_invariant_pseudometric(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), s in 0.0f64..1.0) {
        let phi = Homeomorphism::arctan(&lambda());
        let strip = Strip::new(&lambda());
        let (u, v, w) = (point(a), point(b), point(c));
        let d = |x: &StripPoint, y: &StripPoint| strip.d_int(x, y, &phi).unwrap();
        prop_assert_eq!(d(&u, &u), 0.0);
        prop_assert!(d(&u, &v) == d(&v, &u) || (d(&u, &v) - d(&v, &u)).abs() < 1e-12);
        prop_assert!(d(&u, &w) <= d(&u, &v) + d(&v, &w) + 1e-9);
        let duv = d(&u, &v);
        let same_cell = |x: &StripPoint, y: &StripPoint| {
            let (p, q) = (strip.classify(x).unwrap(), strip.classify(y).unwrap());
            p.k == q.k && p.cell == q.cell
        };
        if duv.is_finite() && same_cell(&u, &v) {
            // flowed points stay in their cell; compare in chart coordinates
            let fu = strip.flow_point(&u, s, &phi).unwrap();
            let fv = strip.flow_point(&v, s, &phi).unwrap();
            let to_q = |r: f64| Rational::from_float(r).unwrap();
            let (pu, pv) = (StripPoint::new(to_q(fu.x), to_q(fu.y)), StripPoint::new(to_q(fv.x), to_q(fv.y)));
            if same_cell(&pu, &u) && same_cell(&pv, &v) {
                let moved = d(&pu, &pv);
                prop_assert!((moved - duv).abs() < 1e-6, "{} vs {}", moved, duv);
            }
        }
    }
}
