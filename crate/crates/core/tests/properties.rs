use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use slcterm::analyzer::{cycle1, cycle2, decide, has_cycle, witness_trace, Verdict, Witness};
use slcterm::collatz::{gen_apply, orbit, weak_apply, GenCollatz, OrbitOutcome, WeakCollatz};
use slcterm::lattice::{count_fractions, height, integer_point_1d, integer_point_2d, Height, Interval, DEFAULT_SCAN_LIMIT};
use slcterm::loopio::{emit_json, emit_text, parse_json, parse_text};
use slcterm::oracle::{build_graph, diagonal_collapse, find_cycle};
use slcterm::poly2::{rat, ConeClass, Constraint, HPoly, Rat};

fn rows(max_rows: usize, c: i64) -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((-c..=c, -c..=c, -c..=c), 1..=max_rows)
}

fn holds(p: &HPoly, x: &BigInt, y: &BigInt) -> bool {
    p.constraints.iter().all(|c| &c.a1 * x + &c.a2 * y <= c.b)
}

/// Integers `k` with `(z, k/den) ∈ p`, by direct per-row floor and ceiling.
fn scaled_column(rows: &[(i64, i64, i64)], z: i64, den: i64) -> Option<(i128, i128)> {
    let (mut lo, mut hi) = (i128::MIN, i128::MAX);
    for &(a1, a2, b) in rows {
        // a2·k <= den·(b - a1·z)
        let rhs = den as i128 * (b as i128 - a1 as i128 * z as i128);
        let a2 = a2 as i128;
        match a2.signum() {
            0 if rhs < 0 => return None,
            0 => {}
            1 => hi = hi.min(Integer::div_floor(&rhs, &a2)),
            _ => lo = lo.max(-Integer::div_floor(&rhs, &-a2)),
        }
    }
    (lo <= hi).then_some((lo, hi))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn text_and_json_round_trip(rs in prop::collection::vec((any::<i64>(), any::<i64>(), any::<i128>()), 0..8)) {
        let p = HPoly::new(rs.iter().map(|&(a, b, c)| Constraint::new(a, b, c)).collect());
        prop_assert_eq!(parse_text(&emit_text(&p)).unwrap(), p.clone());
        prop_assert_eq!(parse_json(&emit_json(&p)).unwrap(), p);
    }

    #[test]
    fn fraction_counts_match_enumeration(lo in -60i64..60, len in -5i64..60, den in 1i64..7, p in 1i64..8) {
        let hi = lo + len;
        let iv = Interval::closed(rat(lo, den), rat(hi, den));
        let brute = (-1000i64..=1000).filter(|k| lo * p <= k * den && k * den <= hi * p).count();
        prop_assert_eq!(count_fractions(&iv, &BigInt::from(p)), Height::finite(brute as u64));
    }

    #[test]
    fn one_dimensional_points(lo in -40i64..40, len in -3i64..20, den in 1i64..6, lower in any::<bool>(), upper in any::<bool>()) {
        let iv = Interval::new(lower.then(|| rat(lo, den)), upper.then(|| rat(lo + len, den)));
        match integer_point_1d(&iv) {
            Some(k) => prop_assert!(iv.contains(&Rat::from_integer(k))),
            None => prop_assert!((-200i64..=200).all(|k| !iv.contains(&rat(k, 1)))),
        }
    }

    #[test]
    fn integer_points_are_members(rs in rows(5, 9)) {
        let p = HPoly::from_rows(&rs);
        if let Some((x, y)) = integer_point_2d(&p, DEFAULT_SCAN_LIMIT).unwrap() {
            prop_assert!(holds(&p, &x, &y));
        }
    }

    #[test]
    fn decomposition_is_feasible(rs in rows(6, 9)) {
        let p = HPoly::from_rows(&rs);
        prop_assume!(!p.is_empty());
        let d = p.decompose().unwrap();
        for v in &d.vertices {
            prop_assert!(p.contains(v), "vertex {} outside", v);
        }
        for g in d.cone.generators() {
            prop_assert!(!g.is_zero());
            for c in &p.constraints {
                prop_assert!(c.normal().dot(&g) <= BigInt::zero(), "generator {} leaves row {}", g, c);
            }
        }
        prop_assert_eq!(d.cone.swapped(), p.swap().recession_cone().unwrap());
    }

    #[test]
    fn short_cycles_verify(rs in rows(6, 7)) {
        let p = HPoly::from_rows(&rs);
        if let Some(s) = cycle1(&p) {
            prop_assert!(holds(&p, &s, &s));
        }
        if let Some((a, b)) = cycle2(&p).unwrap() {
            prop_assert!(holds(&p, &a, &b) && holds(&p, &b, &a));
        }
    }

    #[test]
    fn bounded_cycles_are_found_by_short_checks(rs in rows(6, 7)) {
        let p = HPoly::from_rows(&rs);
        let g = build_graph(&p, 24);
        if let Some(c) = find_cycle(&g) {
            for i in 0..c.len() {
                prop_assert!(holds(&p, &c[i].into(), &c[(i + 1) % c.len()].into()));
            }
            prop_assert!(has_cycle(&p).unwrap());
        }
    }

    #[test]
    fn trace_witnesses_are_self_avoiding(rs in rows(6, 9)) {
        let p = HPoly::from_rows(&rs);
        let v = decide(&p, false).unwrap();
        if let Verdict::NonTerminating { witness, .. } = &v {
            let t = witness_trace(&p, &v, 60).unwrap();
            prop_assert_eq!(t.len(), 60);
            for w in t.windows(2) {
                prop_assert!(holds(&p, &w[0], &w[1]));
            }
            if matches!(witness, Witness::Trace(_)) {
                let mut seen = t.clone();
                seen.sort();
                seen.dedup();
                prop_assert_eq!(seen.len(), t.len());
            }
        }
    }

    #[test]
    fn heights_match_column_enumeration(rs in rows(4, 6)) {
        let p = HPoly::from_rows(&rs);
        prop_assume!(!p.is_empty());
        let d = p.decompose().unwrap();
        let period = match &d.cone {
            ConeClass::Ray(v) | ConeClass::Line(v) if !v.x1.is_zero() => v.x1.abs(),
            _ => return Ok(()),
        };
        let h = height(&p, &d, &period).unwrap();
        let den: i64 = period.try_into().unwrap();
        let brute = (-300..=300)
            .filter_map(|z| scaled_column(&rs, z, den))
            .map(|(lo, hi)| (hi - lo + 1) as u64)
            .max()
            .unwrap_or(0);
        prop_assert_eq!(h, Height::finite(brute));
    }

    #[test]
    fn diagonal_collapse_lies_on_the_segment(a in -50i64..=50, alpha in -50i64..=50, b in -50i64..=50) {
        let r = diagonal_collapse(&a.into(), &alpha.into(), &b.into());
        let valid = (a - alpha).signum() != 0 && (a - alpha).signum() == (b - alpha).signum();
        prop_assert_eq!(r.is_ok(), valid);
        if let Ok(r) = r {
            // (r, r) = t·(a, alpha) + (1 - t)·(alpha, b)
            let t = (&r - rat(alpha, 1)) / rat(a - alpha, 1);
            prop_assert!(t >= Rat::zero() && t <= Rat::one());
            prop_assert_eq!(&t * rat(alpha, 1) + (Rat::one() - &t) * rat(b, 1), r);
        }
    }

    #[test]
    fn weak_mapping_matches_branch_form(d in 2i64..=7, m in -20i64..=20, a in -10i64..=10) {
        let Ok(t) = WeakCollatz::new(d, m, a) else { return Ok(()); };
        for x in -100i64..=100 {
            let x = BigInt::from(x);
            let i = t.branch(&x);
            let num = BigInt::from(m) * &x - (BigInt::from(a) + &i);
            prop_assert!(num.is_multiple_of(&BigInt::from(d)));
            prop_assert_eq!(weak_apply(&t, &x), num / d);
        }
    }

    #[test]
    fn generalized_mapping_is_integral(d in 2usize..=6, seed in prop::collection::vec((-15i64..=15, -5i64..=5), 6)) {
        let dd = d as i64;
        let m: Vec<i64> = seed.iter().take(d).map(|&(m, _)| if m.gcd(&dd) == 1 { m } else { 1 }).collect();
        let r: Vec<i64> = (0..d).map(|i| m[i] * i as i64 + dd * seed[i].1).collect();
        let t = GenCollatz::new(dd, m.iter().map(|&v| v.into()).collect(), r.iter().map(|&v| v.into()).collect()).unwrap();
        for x in -100i64..=100 {
            let i = x.rem_euclid(dd) as usize;
            let y = gen_apply(&t, &x.into());
            prop_assert_eq!(y * dd + r[i], BigInt::from(m[i] * x));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Orbits that stay inside one residue class for ten thousand values are
    /// eventually periodic within that window.
    #[test]
    fn single_class_orbits_enter_cycles(d in 2usize..=5, seed in prop::collection::vec((-9i64..=9, -3i64..=3), 5), n in -50i64..=50) {
        let dd = d as i64;
        let m: Vec<i64> = seed.iter().take(d).map(|&(m, _)| if m != 0 && m.gcd(&dd) == 1 { m } else { 1 }).collect();
        let r: Vec<i64> = (0..d).map(|i| m[i] * i as i64 + dd * seed[i].1).collect();
        let t = GenCollatz::new(dd, m.into_iter().map(Into::into).collect(), r.into_iter().map(Into::into).collect()).unwrap();
        let huge = BigInt::from(10).pow(400);
        let res = orbit(&t, &n.into(), 9_999, &huge);
        let modulus = BigInt::from(dd);
        let first = res.prefix[0].mod_floor(&modulus);
        if res.prefix.iter().all(|x| x.mod_floor(&modulus) == first) {
            prop_assert!(matches!(res.outcome, OrbitOutcome::EnteredCycle { .. }), "{:?}", res.outcome);
        }
    }
}
