mod common;

use num_traits::Signed;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use intervaldyn_core::orbit::{is_reversing, local_image, one_sided_slope, LocalImage};
use intervaldyn_core::rat::{self, frac, Rat};
use intervaldyn_core::shadow::{
    core_approximant, shrink_interval, spec_margin, spec_point, verify_spec, SpecRequest, SpecTarget,
};
use intervaldyn_core::transit::{classify_transitivity, Transitivity};
use intervaldyn_core::{Interval, PLMap, Side};

use common::{grid_map, markov_fixtures, ms, unit_rat};

fn eps() -> impl Strategy<Value = Rat> {
    (1i64..=8).prop_map(|q| frac(1, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn shrunk_images_stay_short(f in grid_map(), e in eps(), x in unit_rat(), w in unit_rat(), n in 0usize..5) {
        // U of length e around x, placed by w
        let lo = rat::max(&rat::zero(), &rat::min(&(&x - &e * &w), &(rat::one() - &e)));
        let u = Interval::new(lo.clone(), &lo + &e);
        prop_assume!(u.contains(&x));
        let v = shrink_interval(&f, &u, &x, &e, n).unwrap();
        prop_assert!(u.contains_interval(&v.interval) && v.interval.contains(&x));
        for i in 0..=n {
            prop_assert!(f.image_n(&v.interval, i).len() <= e);
        }
        prop_assert!(v.reached_at <= n);
        prop_assert_eq!(f.image_n(&v.interval, v.reached_at).len(), e);
    }

    #[test]
    fn margin_grows_as_eps_shrinks(f in grid_map(), a in 1i64..=8, b in 1i64..=8) {
        let s = ms(&f);
        prop_assume!(classify_transitivity(&s) == Transitivity::Mixing);
        let (wide, narrow) = (frac(1, a.min(b)), frac(1, a.max(b)));
        prop_assert!(spec_margin(&s, &narrow).unwrap() >= spec_margin(&s, &wide).unwrap());
    }
}

fn random_request(rng: &mut StdRng, eps: &Rat, m: usize) -> SpecRequest {
    let k = rng.gen_range(1..=3);
    let mut targets = Vec::new();
    let mut a = rng.gen_range(0..4);
    for _ in 0..k {
        let q: i64 = rng.gen_range(2..40);
        let x = frac(rng.gen_range(0..=q), q);
        let slack = rat::min(&x, eps) * frac(rng.gen_range(0..=4), 4);
        let lo = rat::min(&(&x - &slack), &(rat::one() - eps));
        let u = Interval::new(lo.clone(), &lo + eps);
        let b = a + rng.gen_range(0..5);
        targets.push(SpecTarget { x, u, window: (a, b) });
        a = b + m + rng.gen_range(0..4);
    }
    let span = targets.last().unwrap().window.1 - targets[0].window.0;
    SpecRequest { period: m + span + rng.gen_range(0..4), targets, epsilon: eps.clone() }
}

#[test]
fn spec_points_verify_on_mixing_fixtures() {
    let mut rng = StdRng::seed_from_u64(99);
    let mixing: Vec<_> =
        markov_fixtures().into_iter().filter(|(_, s)| classify_transitivity(s) == Transitivity::Mixing).collect();
    assert!(mixing.len() >= 3);
    let pool = [frac(1, 2), frac(1, 3), frac(1, 5), frac(1, 7)];
    for (name, s) in &mixing {
        let margins: Vec<usize> = pool.iter().map(|e| spec_margin(s, e).unwrap()).collect();
        for _ in 0..100 {
            let i = rng.gen_range(0..pool.len());
            let req = random_request(&mut rng, &pool[i], margins[i]);
            req.validate(margins[i]).unwrap();
            let r = spec_point(s, &req).unwrap_or_else(|e| panic!("{name}: {e} for {req:?}"));
            assert!(r.check.ok(), "{name}: {:?}", r.check.violated);
            assert_eq!(verify_spec(s.map(), &req, &r.z), r.check);
            let f = s.map();
            let p = req.period;
            assert!(!is_reversing(f, &r.z, p).unwrap());
            // a positive one-sided slope of f^p, or some side that is not sent across z
            let up =
                [Side::L, Side::R].iter().any(|&sd| one_sided_slope(f, &r.z, p, sd).is_some_and(|m| m.is_positive()));
            let kept = [Side::L, Side::R].iter().any(|&sd| local_image(f, &r.z, p, sd) == LocalImage::Onto(sd));
            assert!(up || kept, "{name}: z = {} flips both sides", rat::show(&r.z));
        }
    }
}

#[test]
fn approximants_track_orbits_near_a_fixed_end() {
    // fixed points at 1/20 and 1/10, with [0,1/20] mapped into [0,1/10]
    let f = PLMap::from_fracs(&[
        ((0, 1), (0, 1)),
        ((1, 40), (3, 40)),
        ((1, 20), (1, 20)),
        ((3, 40), (1, 40)),
        ((1, 10), (1, 10)),
        ((1, 2), (1, 1)),
        ((1, 1), (0, 1)),
    ])
    .unwrap();
    let (e, d) = (frac(1, 20), frac(1, 10));
    let eta = &d * rat::int(3);
    for k in 0..=20 {
        let x = &e * frac(k, 20);
        let y = core_approximant(&f, &e, &d, &x, 30).unwrap();
        assert!(y >= e);
        for n in 0..=30 {
            let gap = (f.iterate(&x, n) - f.iterate(&y, n)).abs();
            assert!(gap <= &eta / rat::int(3), "x={} n={n}", rat::show(&x));
        }
    }
}
