use ucadmn::dmnsynth::{alpha_beta, feed_port_sweep, synth_two_stage, two_stage_tl_realization, BranchChoice};
use ucadmn::netcore::{band_below_threshold, FrequencySweep, Selection};
use ucadmn::tuner::*;
use ucadmn::ucamodel::{admittance_of, CmsModel, SymmetricArrayModel, UcaGeometry};
use ucadmn::Complex64;

const F0: f64 = 3.6e9;

fn two_stage_start() -> (ucadmn::netlist::Netlist, CmsModel, UcaGeometry) {
    let g = UcaGeometry::new(3, 0.1).unwrap();
    let m = CmsModel::new(F0);
    let (a, b) = alpha_beta(&admittance_of(&m.array(&g, F0).unwrap()).unwrap()).unwrap();
    let d = synth_two_stage(a, b, 50.0, F0, BranchChoice::MinMaxSusceptance).unwrap();
    (two_stage_tl_realization(&d).unwrap(), m, g)
}

#[test]
fn exact_design_scores_zero_at_f0() {
    let (nl, m, g) = two_stage_start();
    let spec = ObjectiveSpec::new(F0, F0).unwrap();
    let ant = m.sweep(&g, &[F0]).unwrap();
    assert_eq!(evaluate_objective(&nl, &ant, &spec, 50.0).unwrap(), 0.0);
    let r = broadband_tune(&nl, &ant, &spec, 50.0, 1, 500).unwrap();
    assert!(r.unchanged);
    assert_eq!(r.netlist, nl);
}

#[test]
fn zero_budget_returns_start() {
    let (nl, m, g) = two_stage_start();
    let spec = ObjectiveSpec::around(F0, 0.02).unwrap();
    let ant = m.sweep(&g, &spec.sample_freqs()).unwrap();
    let r = broadband_tune(&nl, &ant, &spec, 50.0, 1, 0).unwrap();
    assert!(r.unchanged);
    assert_eq!(r.evals, 0);
    assert_eq!(r.netlist, nl);
}

#[test]
fn broadband_tuning_keeps_topology_and_band() {
    let (nl, m, g) = two_stage_start();
    let spec = ObjectiveSpec::around(F0, 0.02).unwrap().with_samples(41);
    let freqs = spec.sample_freqs();
    let ant = m.sweep(&g, &freqs).unwrap();
    let r = broadband_tune(&nl, &ant, &spec, 50.0, 3, 1500).unwrap();
    assert!(r.objective_after <= r.objective_before);
    assert_eq!(r.netlist.segment_count(), 33);
    assert_eq!(r.netlist.elements.len(), nl.elements.len());
    for (a, b) in r.netlist.elements.iter().zip(&nl.elements) {
        use ucadmn::netlist::Element::*;
        match (a, b) {
            (Line { z_c: z1, theta: t1, a: a1, b: b1 }, Line { z_c: z2, theta: t2, a: a2, b: b2 }) => {
                assert_eq!((a1, b1), (a2, b2));
                assert!((z1 / z2 - 1.0).abs() <= TUNE_RANGE + 1e-12);
                assert!((t1 / t2 - 1.0).abs() <= TUNE_RANGE + 1e-12);
            }
            (Stub { node: n1, .. }, Stub { node: n2, .. }) => assert_eq!(n1, n2),
            _ => panic!("element kind changed"),
        }
    }
    let before = band_below_threshold(&feed_port_sweep(&nl, &ant, &freqs, 50.0).unwrap(), -16.0, Selection::Both).unwrap();
    let after =
        band_below_threshold(&feed_port_sweep(&r.netlist, &ant, &freqs, 50.0).unwrap(), -16.0, Selection::Both).unwrap();
    assert_eq!(before.len(), 1);
    assert!(after.iter().any(|b| b.f_lo <= before[0].f_lo && b.f_hi >= before[0].f_hi), "{before:?} -> {after:?}");
}

#[test]
fn neutralization_four_elements_at_f0() {
    let g = UcaGeometry::new(4, 0.16).unwrap();
    let spec = ObjectiveSpec::new(F0, F0).unwrap();
    let ant = CmsModel::new(F0).sweep(&g, &[F0]).unwrap();
    let r = optimize_neutralization(4, F0, &ant, &spec, 50.0, 1, 10_000).unwrap();
    assert!(r.met_target, "worst {}", r.worst_db);
    assert!(r.log.windows(2).all(|w| w[1].score <= w[0].score));
    let again = optimize_neutralization(4, F0, &ant, &spec, 50.0, 1, 10_000).unwrap();
    assert_eq!(r.design, again.design);
}

#[test]
fn uncoupled_antenna_is_matched() {
    let z = CmsModel::new(F0).self_impedance(F0);
    let m = SymmetricArrayModel::uniform(3, z, Complex64::new(0.0, 0.0), F0).unwrap();
    let ant = FrequencySweep::new(vec![m.z_network().unwrap()]).unwrap();
    let spec = ObjectiveSpec::new(F0, F0).unwrap();
    let r = optimize_neutralization(3, F0, &ant, &spec, 50.0, 5, 5000).unwrap();
    assert_eq!(r.objective, 0.0);
}

#[test]
fn optimizer_rejects_small_budget() {
    let g = UcaGeometry::new(3, 0.1).unwrap();
    let ant = CmsModel::new(F0).sweep(&g, &[F0]).unwrap();
    let spec = ObjectiveSpec::new(F0, F0).unwrap();
    assert!(optimize_neutralization(3, F0, &ant, &spec, 50.0, 1, 999).is_err());
    assert!(ObjectiveSpec::new(2.0, 1.0).is_err());
}
