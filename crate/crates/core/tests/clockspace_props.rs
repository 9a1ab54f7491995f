mod common;

use common::laws::{check_laws, clocks, random_federation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tiotest_core::clockspace::{Atom, Federation, Rational, Region, Rel};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn federation_laws(seed in any::<u64>(), n in 1usize..=3, m in 1i64..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = clocks(n);
        let a = random_federation(&mut rng, &c, m);
        let b = random_federation(&mut rng, &c, m);
        prop_assert_eq!(check_laws(&a, &b, m), Ok(()));
    }

    #[test]
    fn timed_pred_stays_inside_down(seed in any::<u64>(), n in 1usize..=2, m in 1i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = clocks(n);
        let s = random_federation(&mut rng, &c, m);
        let v = random_federation(&mut rng, &c, m);
        let p = s.timed_pred(&v);
        prop_assert!(p.is_subset(&s.down()));
        prop_assert!(!p.intersects(&v));
        prop_assert!(s.subtract(&v).is_subset(&p));
        prop_assert!(s.timed_pred(&Federation::empty(&c)).equals(&s.down()));
    }

    #[test]
    fn regions_partition_the_grid(n in 1usize..=3, m in 1i64..=3, k in 0usize..64) {
        let all = Region::all(n, m);
        let p: Vec<Rational> = (0..n).map(|i| Rational::new(((k >> (2 * i)) % 4) as i64 * (m + 1), 3)).collect();
        let hits = all.iter().filter(|r| r.to_zone().contains(&p)).count();
        prop_assert_eq!(hits, 1);
        prop_assert!(all.contains(&Region::of_valuation(&p, m)));
    }
}

#[test]
fn complement_of_a_point_excludes_only_it() {
    let c = clocks(2);
    let point = Federation::from_atoms(&c, &[Atom::clock(1, Rel::Eq, 1), Atom::clock(2, Rel::Eq, 2)]);
    let rest = point.complement();
    assert!(!rest.contains(&[Rational::from_integer(1), Rational::from_integer(2)]));
    assert!(rest.contains(&[Rational::from_integer(1), Rational::new(5, 2)]));
    assert!(rest.union(&point).equals(&Federation::universe(&c)));
}

#[test]
fn free_is_existential_and_reset_pins_zero() {
    let c = clocks(2);
    let a = Federation::from_atoms(&c, &[Atom::clock(1, Rel::Ge, 2), Atom::diff(2, 1, Rel::Le, 0)]);
    let freed = a.free(&[1]);
    assert!(freed.contains(&[Rational::from_integer(0), Rational::from_integer(5)]));
    assert!(!a.reset(&[1]).contains(&[Rational::from_integer(1), Rational::from_integer(0)]));
    assert!(a.reset(&[1]).contains(&[Rational::from_integer(0), Rational::from_integer(3)]));
}
