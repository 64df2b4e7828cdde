use std::collections::BTreeMap;

use morphocell::dsl::{evaluate, parse_str, EvalContext};
use morphocell::geometry::{
    sample_heightfield, sample_volume, time_sweep, CellSpec, GeometryError, Resolution, ScalarGrid, SpatialDomain,
};
use morphocell::EvalError;
use proptest::prelude::*;

fn square_cell(src: &str) -> CellSpec<f64> {
    CellSpec::height_field(parse_str(src).unwrap(), SpatialDomain::centered_square(4.0)).unwrap()
}

fn max_change(a: &ScalarGrid<f64>, b: &ScalarGrid<f64>) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .filter_map(|(p, q)| Some((p.as_ref()? - q.as_ref()?).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn time_continuity_of_evolving_families() {
    for src in ["abs(x*y)^(1/t)", "exp(-(x^2 + y^2)^(1/t))"] {
        let cell = square_cell(src);
        let base = sample_heightfield(&cell, 1.0, 129, 129).unwrap();
        let coarse = max_change(&base, &sample_heightfield(&cell, 1.0 + 1e-3, 129, 129).unwrap());
        let fine = max_change(&base, &sample_heightfield(&cell, 1.0 + 1e-6, 129, 129).unwrap());
        assert!(coarse > 0.0, "{src}");
        assert!(coarse / fine >= 100.0, "{src}: {coarse} vs {fine}");
    }
}

#[test]
fn abs_xy_grid_symmetries_are_exact() {
    for t in [1.0, 2.0, 4.0, 0.7] {
        let g = sample_heightfield(&square_cell("abs(x*y)^(1/t)"), t, 129, 129).unwrap();
        let n = 129;
        for j in 0..n {
            for i in 0..n {
                let v = g.get(i, j, 0).unwrap().to_bits();
                assert_eq!(v, g.get(j, i, 0).unwrap().to_bits());
                assert_eq!(v, g.get(n - 1 - i, j, 0).unwrap().to_bits());
                assert_eq!(v, g.get(i, n - 1 - j, 0).unwrap().to_bits());
            }
        }
    }
}

#[test]
fn spec_examples() {
    let g = sample_heightfield(&square_cell("abs(x*y)^(1/t)"), 1.0, 3, 3).unwrap();
    assert_eq!(g.values.iter().map(|v| v.unwrap()).collect::<Vec<_>>(), [4.0, 0.0, 4.0, 0.0, 0.0, 0.0, 4.0, 0.0, 4.0]);

    let cube = CellSpec::implicit(parse_str("x^2 + y^2 + z^2").unwrap(), SpatialDomain::cube(2.0)).unwrap();
    let v = sample_volume(&cube, 1.0, 5, 5, 5).unwrap();
    assert_eq!(v.get(0, 0, 0), Some(12.0));
    assert_eq!(v.get(2, 2, 2), Some(0.0));
    assert_eq!(v.get(4, 4, 4), Some(12.0));

    let unbound = CellSpec::<f64>::implicit(parse_str("H*x").unwrap(), SpatialDomain::cube(1.0));
    assert_eq!(unbound.unwrap_err(), GeometryError::Eval(EvalError::UnboundParam("H".into())));

    let membership = |p| cube.membership(p, 1.0).unwrap().inside;
    assert!(membership([0.0, 0.0, 0.0]));
    assert!(membership([1.0, 0.0, 0.0]));
    assert!(!membership([2.0, 0.0, 0.0]));
    assert!(!membership([3.0, 0.0, 0.0]));
}

#[test]
fn disc_domain_marks_holes() {
    let params = BTreeMap::from([("H".to_string(), 10.0), ("b".to_string(), 0.1)]);
    let cell = CellSpec::new(
        morphocell::CellKind::HeightField,
        parse_str("H - b*(x^2 + y^2)").unwrap(),
        SpatialDomain::Disc {
            cx: 0.0,
            cy: 0.0,
            radius: 10.0,
        },
        params,
    )
    .unwrap();
    let g = sample_heightfield(&cell, 1.0, 129, 129).unwrap();
    assert_eq!(g.get(64, 64, 0), Some(10.0));
    assert_eq!(g.get(0, 0, 0), None);
    // rim nodes on the axes
    assert_eq!(g.get(128, 64, 0), Some(0.0));
    assert_eq!(g.get(64, 0, 0), Some(0.0));
    for (idx, v) in g.values.iter().enumerate() {
        let [x, y, _] = g.node_position(idx);
        assert_eq!(v.is_some(), x * x + y * y <= 100.0 * (1.0 + 1e-15), "({x}, {y})");
    }
}

#[test]
fn sweep_matches_single_shots() {
    let cell = square_cell("abs(x*y)^(1/t)");
    let res = Resolution::Planar { nx: 33, ny: 33 };
    let sweep = morphocell::geometry::sample_at_times(&cell, &[1.0, 2.0, 4.0], res).unwrap();
    for (g, t) in sweep.iter().zip([1.0, 2.0, 4.0]) {
        assert_eq!(g, &sample_heightfield(&cell, t, 33, 33).unwrap());
    }
    let linear = time_sweep(&cell, 1.0, 4.0, 4, res).unwrap();
    assert_eq!(linear.iter().map(|g| g.t).collect::<Vec<_>>(), [1.0, 2.0, 3.0, 4.0]);
    assert_eq!(time_sweep(&cell, 1.5, 3.0, 1, res).unwrap()[0].t, 1.5);
    assert!(matches!(time_sweep(&cell, 0.0, 1.0, 3, res), Err(GeometryError::TimeRange { .. })));
    assert!(matches!(
        sample_heightfield(&cell, -1.0, 9, 9),
        Err(GeometryError::TimeNotPositive(_))
    ));
}

#[test]
fn grid_json_layout() {
    let cell = CellSpec::height_field(
        parse_str("sqrt(x)").unwrap(),
        SpatialDomain::centered_square(2.0),
    )
    .unwrap();
    let g = sample_heightfield(&cell, 1.0, 3, 2).unwrap();
    let v: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
    assert_eq!(v["dims"], serde_json::json!([3, 2]));
    assert_eq!(v["bounds"]["x"], serde_json::json!([-1.0, 1.0]));
    assert!(v["values"][0].is_null());
    assert_eq!(v["values"][1], 0.0);
    assert_eq!(v["values"][2], 1.0);
}

proptest! {
    #[test]
    fn grid_agrees_with_pointwise_evaluation(
        t in 0.2f64..5.0,
        i in 0usize..41,
        j in 0usize..41,
        src in prop::sample::select(vec![
            "abs(x*y)^(1/t)",
            "exp(-(x^2 + y^2)^(1/t))",
            "sin(3*x)*cos(2*y) + t",
            "atan2(y, x)",
        ]),
    ) {
        let cell = square_cell(src);
        let g = sample_heightfield(&cell, t, 41, 41).unwrap();
        let [x, y, _] = g.node_position(g.index(i, j, 0));
        prop_assert_eq!(x, g.x_at(i));
        let direct = evaluate(cell.expr(), &EvalContext::new(x, y, 0.0, t)).ok();
        prop_assert_eq!(g.get(i, j, 0).map(f64::to_bits), direct.map(f64::to_bits));
    }

    #[test]
    fn fig4_rises_with_time_below_one(i in 0usize..65, j in 0usize..65) {
        let cell = square_cell("abs(x*y)^(1/t)");
        let z: Vec<f64> = [1.0, 2.0, 4.0]
            .iter()
            .map(|&t| sample_heightfield(&cell, t, 65, 65).unwrap().get(i, j, 0).unwrap())
            .collect();
        let [x, y, _] = sample_heightfield(&cell, 1.0, 65, 65).unwrap().node_position(i + 65 * j);
        let p = (x * y).abs();
        if p > 0.0 && p < 1.0 {
            prop_assert!(z[0] < z[1] && z[1] < z[2]);
        } else if p == 1.0 {
            prop_assert!(z.iter().all(|&v| v == 1.0));
        }
    }
}

#[test]
fn single_precision_sampling() {
    let cell: CellSpec<f32> =
        CellSpec::height_field(parse_str("abs(x*y)^(1/t)").unwrap(), SpatialDomain::centered_square(4.0)).unwrap();
    let g = sample_heightfield(&cell, 2.0f32, 5, 5).unwrap();
    assert_eq!(g.get(0, 0, 0), Some(2.0));
}
