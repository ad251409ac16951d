use proptest::prelude::*;

use sdiff_dbi::bps::eom_residual;
use sdiff_dbi::model::TargetMeasure;
use sdiff_dbi::observables::{
    charge_quadrature, closed_form_energy, energy_per_charge_average, energy_quadrature, energy_report,
};
use sdiff_dbi::profile::{baby_old_exact, exact_profile, read_profile_csv, solve_profile, write_profile_csv, GridSpec};
use sdiff_dbi::{parse_potential, Error, KineticLaw, ModelParams, Sector};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn baby_solutions_match_closed_form(beta in 0.3f64..5.0, mu in 0.3f64..5.0, n in 1i32..6) {
        let p = ModelParams::new(Sector::Baby2D, beta, mu, n);
        let v = parse_potential("old:1", Sector::Baby2D).unwrap();
        let prof = solve_profile(&p, &v, &GridSpec::samples(300)).unwrap();
        prop_assert!(prof.check_invariants().is_ok());
        for s in &prof.samples {
            prop_assert!((s.field - baby_old_exact(s.coordinate, &p)).abs() < 1e-9);
        }
        prop_assert!((charge_quadrature(&prof).unwrap() - f64::from(n)).abs() < 1e-6);
        let r = energy_report(&prof, &v).unwrap();
        prop_assert!(r.rel_discrepancy_closed.unwrap() < 1e-8);
        prop_assert!(r.rel_discrepancy_avg.unwrap() < 1e-8);
    }

    #[test]
    fn skyrme_energies_match_closed_forms(sigma in 0.1f64..10.0, n in 1i32..4, bps in any::<bool>()) {
        let p = ModelParams::new(Sector::Skyrme3D, sigma.sqrt(), 1.0, n);
        let v = parse_potential(if bps { "bps" } else { "standard" }, Sector::Skyrme3D).unwrap();
        let prof = solve_profile(&p, &v, &GridSpec::samples(200)).unwrap();
        let q = energy_quadrature(&prof, &v).unwrap();
        let c = closed_form_energy(&p, &v).unwrap().unwrap();
        prop_assert!((q / c - 1.0).abs() < 1e-8, "{q} vs {c}");
        let avg = energy_per_charge_average(&p, &v, &TargetMeasure::for_sector(Sector::Skyrme3D)).unwrap();
        prop_assert!((avg * f64::from(n) / q - 1.0).abs() < 1e-8);
    }

    #[test]
    fn energy_per_charge_is_independent_of_sign(n in 1i32..5, alpha in 0.6f64..3.0) {
        let v = parse_potential("old:1", Sector::Baby2D).unwrap();
        let p = ModelParams::new(Sector::Baby2D, 1.0, 1.0, n)
            .with_kinetic_law(KineticLaw::PowerFamily { alpha });
        let e_pos = energy_quadrature(&solve_profile(&p, &v, &GridSpec::samples(50)).unwrap(), &v).unwrap();
        let e_neg = energy_quadrature(&solve_profile(&p.with_charge(-n), &v, &GridSpec::samples(50)).unwrap(), &v).unwrap();
        prop_assert!((e_pos / e_neg - 1.0).abs() < 1e-12);
    }
}

#[test]
fn target_measures_have_unit_mass() {
    for sector in [Sector::Baby2D, Sector::Skyrme3D] {
        let m = TargetMeasure::for_sector(sector);
        assert!((m.mass() - 1.0).abs() < 1e-12, "{sector}: {}", m.mass());
        assert!((m.average(|_| 3.0) - 3.0).abs() < 1e-12);
    }
}

#[test]
fn profile_csv_round_trips() {
    let p = ModelParams::new(Sector::Skyrme3D, 1.0, 1.0, 2);
    let v = parse_potential("standard", Sector::Skyrme3D).unwrap();
    let prof = solve_profile(&p, &v, &GridSpec::samples(120)).unwrap();
    let mut buf = Vec::new();
    write_profile_csv(&mut buf, &prof).unwrap();
    let back = read_profile_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(back, prof.samples);
}

#[test]
fn profile_csv_errors_carry_lines() {
    let header = "coordinate,field,derivative,energy_density,charge_density";
    assert!(matches!(read_profile_csv(""), Err(Error::Parse { line: 1, .. })));
    assert!(matches!(read_profile_csv("a,b\n"), Err(Error::Parse { line: 1, .. })));
    let text = format!("{header}\n0,1,0,0,0\n0.1,0.5,x,0,0\n");
    assert!(matches!(read_profile_csv(&text), Err(Error::Parse { line: 3, .. })));
    let text = format!("{header}\n0,1,0,0,0,9\n");
    assert!(matches!(read_profile_csv(&text), Err(Error::Parse { line: 2, .. })));
}

#[test]
fn residual_flags_a_perturbed_compacton() {
    let p = ModelParams::new(Sector::Baby2D, 1.0, 1.0, 1);
    let v = parse_potential("old:1", Sector::Baby2D).unwrap();
    let prof = exact_profile(&p, &v, &GridSpec::spacing(1e-3)).unwrap();
    let r = prof.compacton_radius.unwrap();
    let clean = eom_residual(&prof, &v).unwrap().max_scaled_residual;
    let bumped = eom_residual(&prof.perturbed(0.01, 0.5 * r, 0.05 * r), &v).unwrap().max_scaled_residual;
    assert!(bumped > 1e3 * clean, "{bumped} vs {clean}");
}

#[test]
fn no_soliton_without_potential_strength() {
    let v = parse_potential("old:1", Sector::Baby2D).unwrap();
    let p = ModelParams::new(Sector::Baby2D, 1.0, 0.0, 1);
    assert!(matches!(solve_profile(&p, &v, &GridSpec::default()), Err(Error::NoSoliton(_))));
}
