use hcm_core::design::{sweep, DesignGrid};
use hcm_core::mechanics::{
    energy_barrier, section_properties, snap_timescale, solve, BucklingSolution, Material, RibbonGeometry,
    SectionConvention,
};

const CONVENTIONS: [SectionConvention; 2] = [SectionConvention::WidthCubed, SectionConvention::WeakAxis];

/// `C·φ'' + (P²/EI)(l − z)²·φ` at `z`, with `φ''` from a fourth-order
/// central difference, divided by the larger of the two terms.
fn relative_residual(sol: &BucklingSolution, z: f64) -> f64 {
    let l = sol.geometry.half_length;
    let h = 1e-3 * l;
    let f = |z: f64| sol.mode_shape(z).unwrap();
    let second = (-f(z + 2.0 * h) + 16.0 * f(z + h) - 30.0 * f(z) + 16.0 * f(z - h) - f(z - 2.0 * h)) / (12.0 * h * h);
    let torsion = sol.section.torsional_rigidity * second;
    let p = sol.critical_load;
    let bending = p * p / sol.section.bending_stiffness * (l - z) * (l - z) * f(z);
    (torsion + bending).abs() / torsion.abs().max(bending.abs())
}

#[test]
fn mode_shape_satisfies_the_torsion_equation() {
    for convention in CONVENTIONS {
        let sol = solve(&Material::petg(), &RibbonGeometry::reference(), convention).unwrap();
        let l = sol.geometry.half_length;
        // stay two stencil widths away from both ends of [0, l)
        let (a, b) = (2e-3 * l, l - 2e-3 * l);
        for i in 0..100 {
            let z = a + (b - a) * (i as f64 + 0.5) / 100.0;
            let r = relative_residual(&sol, z);
            assert!(r < 1e-6, "{convention:?} z={z} residual={r}");
        }
    }
}

#[test]
fn mode_shape_boundary_conditions() {
    for convention in CONVENTIONS {
        let sol = solve(&Material::petg(), &RibbonGeometry::reference(), convention).unwrap();
        // twist vanishes at the clamp and is stationary at the free tip
        assert!(sol.mode_shape(0.0).unwrap().abs() < 1e-12 * sol.amplitude);
        let tip_slope = sol.mode_slope(sol.geometry.half_length).unwrap();
        let root_slope = sol.mode_slope(0.0).unwrap();
        assert!(tip_slope.abs() > 0.0 && root_slope.abs() > 0.0);
    }
}

#[test]
fn critical_load_scales_with_inverse_square_length() {
    let base = RibbonGeometry::reference();
    for convention in CONVENTIONS {
        let p1 = solve(&Material::petg(), &base, convention).unwrap().critical_load;
        for factor in [0.75, 1.25, 1.5] {
            let g = base.with_design(base.half_length * factor, base.locking_displacement);
            let p = solve(&Material::petg(), &g, convention).unwrap().critical_load;
            assert!((p * factor * factor / p1 - 1.0).abs() < 1e-13);
        }
    }
}

#[test]
fn barrier_is_linear_in_locking_displacement() {
    let p = 1.878;
    let u1 = energy_barrier(p, 0.01).unwrap();
    for d in [0.005, 0.02, 0.03] {
        assert!((energy_barrier(p, d).unwrap() / u1 - d / 0.01).abs() < 1e-13);
    }
}

#[test]
fn snap_time_scales_with_length_squared_over_thickness() {
    let material = Material::petg();
    let base = RibbonGeometry::reference();
    let t1 = snap_timescale(&base, &material).unwrap();
    for (fl, ft) in [(2.0, 1.0), (1.0, 2.0), (0.7, 1.3)] {
        let g = RibbonGeometry { half_length: base.half_length * fl, thickness: base.thickness * ft, ..base };
        let t = snap_timescale(&g, &material).unwrap();
        assert!((t / t1 - fl * fl / ft).abs() < 1e-13);
    }
}

#[test]
fn snap_time_of_the_reference_ribbon() {
    let t = snap_timescale(&RibbonGeometry::reference(), &Material::petg()).unwrap();
    assert!((0.140..=0.160).contains(&t));
}

#[test]
fn section_conventions_differ_only_in_bending_stiffness() {
    let (m, g) = (Material::petg(), RibbonGeometry::reference());
    let a = section_properties(&m, &g, SectionConvention::WidthCubed).unwrap();
    let b = section_properties(&m, &g, SectionConvention::WeakAxis).unwrap();
    assert_eq!(a.torsional_rigidity, b.torsional_rigidity);
    let ratio = a.bending_stiffness / b.bending_stiffness;
    let expected = (g.width / g.thickness).powi(2);
    assert!((ratio / expected - 1.0).abs() < 1e-13);
}

#[test]
fn default_sweep_is_monotone() {
    for convention in CONVENTIONS {
        let grid = DesignGrid::standard(Material::petg(), 0.015, 0.000381, convention);
        let entries = sweep(&grid).unwrap();
        let nl = grid.half_length.len();
        let nd = grid.locking_displacement.len();
        assert_eq!(entries.len(), nl * nd);
        let at = |i: usize, j: usize| entries[i * nd + j].outcome.as_ref().unwrap();
        for i in 0..nl {
            for j in 0..nd {
                let p = at(i, j);
                if i + 1 < nl {
                    let q = at(i + 1, j);
                    assert!(q.tip_angle < p.tip_angle && q.barrier < p.barrier);
                }
                if j + 1 < nd {
                    let q = at(i, j + 1);
                    assert!(q.tip_angle > p.tip_angle && q.barrier > p.barrier);
                }
            }
        }
    }
}
