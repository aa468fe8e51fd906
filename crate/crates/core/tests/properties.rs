use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use softmotion::general::plan_min_time_1d;
use softmotion::general::{critical_length, PhaseState};
use softmotion::path::plan_waypoint_path;
use softmotion::sync::{plan_ptp_nd, scale_limits_for_duration};
use softmotion::tracker::Tracker;
use softmotion::{check_limits, plan_ptp_1d, AxisProfile, KinematicLimits, KinematicState};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x005e_ed0f_50f7),
        failure_persistence: None,
        ..Config::default()
    }
}

fn limits() -> impl Strategy<Value = KinematicLimits> {
    (0.2f64..3.0, 0.1f64..1.0, 0.05f64..0.5).prop_map(|(j, a, v)| KinematicLimits::new(j, a, v).unwrap())
}

/// An `(a, v)` state that can be left (`arriving == false`) or reached
/// without breaking the velocity bound.
fn phase(l: &KinematicLimits, ra: f64, rv: f64, arriving: bool) -> Option<PhaseState> {
    let a = ra * l.amax();
    let brake = a * a.abs() / (2.0 * l.jmax());
    let (lo, hi) = if arriving {
        ((brake - l.vmax()).max(-l.vmax()), (brake + l.vmax()).min(l.vmax()))
    } else {
        ((-l.vmax() - brake).max(-l.vmax()), (l.vmax() - brake).min(l.vmax()))
    };
    // stay a hair inside the admissible set
    let (lo, hi) = (lo + 1e-9, hi - 1e-9);
    (hi > lo).then(|| PhaseState::new(a, lo + rv * (hi - lo)))
}

#[derive(Debug, Clone)]
struct Problem {
    limits: KinematicLimits,
    init: KinematicState,
    final_state: KinematicState,
}

fn problem() -> impl Strategy<Value = Problem> {
    (limits(), -1.0f64..1.0, 0.0f64..1.0, -1.0f64..1.0, 0.0f64..1.0, -0.5f64..0.5).prop_filter_map(
        "admissible boundary",
        |(l, ra0, rv0, raf, rvf, d)| {
            let i = phase(&l, ra0, rv0, false)?;
            let f = phase(&l, raf, rvf, true)?;
            Some(Problem {
                limits: l,
                init: i.at(0.0),
                final_state: f.at(d),
            })
        },
    )
}

fn same_motion(a: &AxisProfile, b: &AxisProfile, tol: f64) -> Result<(), TestCaseError> {
    prop_assert!((a.duration() - b.duration()).abs() <= tol);
    for k in 0..=64 {
        let t = a.duration() * k as f64 / 64.0;
        let (sa, _) = a.evaluate_clamped(t);
        let (sb, _) = b.evaluate_clamped(t);
        prop_assert!(sa.approx_eq(&sb, tol), "t={t}: {sa} vs {sb}");
    }
    Ok(())
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn planner_output_is_bounded_short_and_exact(p in problem()) {
        let prof = plan_min_time_1d(&p.init, &p.final_state, &p.limits).unwrap();
        prop_assert!(check_limits(&prof, &p.limits, 1e-9).is_empty());
        prop_assert!(prof.len() <= 7);
        prop_assert!(prof.start_state().approx_eq(&p.init, 1e-9));
        prop_assert!(prof.end_state().approx_eq(&p.final_state, 1e-9), "{} vs {}", prof.end_state(), p.final_state);
        for s in prof.segments() {
            let j = s.jerk.abs();
            prop_assert!(j == 0.0 || (j - p.limits.jmax()).abs() < 1e-12);
        }
    }

    #[test]
    fn mirrored_problem_gives_mirrored_profile(p in problem()) {
        let direct = plan_min_time_1d(&p.init, &p.final_state, &p.limits).unwrap();
        let mirrored = plan_min_time_1d(&p.init.negated(), &p.final_state.negated(), &p.limits).unwrap();
        same_motion(&direct, &mirrored.negated(), 1e-9)?;
    }

    /// Beyond the critical length the motion changes type. The minimal time
    /// may jump there, because moving boundaries can make one side need a
    /// reversal; the other side must then be continuous.
    #[test]
    fn duration_is_continuous_across_critical_length(p in problem()) {
        let (i, f) = (PhaseState::from(p.init), PhaseState::from(p.final_state));
        let dc = critical_length(i, f, &p.limits).unwrap();
        let t = |d: f64| plan_min_time_1d(&i.at(0.0), &f.at(d), &p.limits).unwrap().duration();
        let (below, at, above) = (t(dc - 1e-6), t(dc), t(dc + 1e-6));
        let (lo, hi) = ((below - at).abs() <= 1e-3, (above - at).abs() <= 1e-3);
        prop_assert!(lo || hi, "{below} {at} {above}");
    }

    #[test]
    fn multi_axis_motion_stays_on_the_segment(
        l in limits(),
        p0 in prop::collection::vec(-0.5f64..0.5, 3),
        pf in prop::collection::vec(-0.5f64..0.5, 3),
    ) {
        let axes = plan_ptp_nd(&p0, &pf, &l).unwrap();
        let t_end = axes[0].duration();
        let long = (0..3).max_by(|&a, &b| (pf[a] - p0[a]).abs().total_cmp(&(pf[b] - p0[b]).abs())).unwrap();
        for k in 0..=50 {
            let t = t_end * k as f64 / 50.0;
            let s = (axes[long].evaluate_clamped(t).0.x - p0[long]) / (pf[long] - p0[long]);
            for i in 0..3 {
                let x = axes[i].evaluate_clamped(t).0.x;
                prop_assert!((x - (p0[i] + s * (pf[i] - p0[i]))).abs() <= 1e-6);
            }
        }
        for a in &axes {
            prop_assert!(check_limits(a, &l, 1e-9).is_empty());
            prop_assert!((a.duration() - t_end).abs() < 1e-9);
        }
    }

    #[test]
    fn slowing_the_limits_dilates_time(l in limits(), d in -0.6f64..0.6, s in 1.0f64..4.0) {
        let fast = plan_ptp_1d(d, &l);
        prop_assume!(fast.duration() > 0.0);
        let slow_limits = scale_limits_for_duration(&l, fast.duration(), s * fast.duration()).unwrap();
        let slow = plan_ptp_1d(d, &slow_limits);
        prop_assert!((slow.duration() - s * fast.duration()).abs() <= 1e-9);
        for k in 0..=40 {
            let t = slow.duration() * k as f64 / 40.0;
            let a = slow.evaluate_clamped(t).0.x;
            let b = fast.evaluate_clamped(t / s).0.x;
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn tracker_converges_without_overshoot(l in limits(), target in -1.0f64..1.0) {
        let v_ref = target * l.vmax();
        let mut t = Tracker::new(vec![KinematicState::rest(0.0)], vec![l], 0.01).unwrap();
        let settle = plan_min_time_1d(
            &KinematicState::rest(0.0),
            &PhaseState::new(0.0, v_ref).at(critical_length(PhaseState::default(), PhaseState::new(0.0, v_ref), &l).unwrap()),
            &l,
        ).unwrap().duration();
        let ticks = (settle / 0.01).ceil() as usize + 5;
        for k in 0..ticks {
            let s = t.step(&[v_ref]).unwrap()[0];
            prop_assert!(s.v.abs() <= v_ref.abs() + 1e-9 && s.v * v_ref >= -1e-12);
            prop_assert!(s.a.abs() <= l.amax() + 1e-9);
            if (k + 1) as f64 * 0.01 >= settle + 0.01 {
                prop_assert!((s.v - v_ref).abs() < 1e-9 && s.a.abs() < 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn waypoint_paths_are_smooth_bounded_and_exact(
        pts in prop::collection::vec(prop::collection::vec(-0.3f64..0.3, 2), 3..5),
    ) {
        let l = KinematicLimits::LINEAR;
        let path = plan_waypoint_path(&pts, &[l; 2]).unwrap();
        for (i, axis) in path.axes.iter().enumerate() {
            for w in axis.segments().windows(2) {
                prop_assert!(w[0].end().approx_eq(&w[1].start, 1e-9));
            }
            prop_assert!(check_limits(axis, &l, 1e-9).is_empty());
            prop_assert!(axis.start_state().approx_eq(&KinematicState::rest(pts[0][i]), 1e-12));
            prop_assert!(axis.end_state().approx_eq(&KinematicState::rest(pts[pts.len() - 1][i]), 1e-9));
            prop_assert!((axis.duration() - path.duration()).abs() < 1e-6);
        }
    }
}
