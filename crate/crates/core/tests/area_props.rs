use proptest::prelude::*;
use roughsum::experiments::{dyadic_knots, key_area_inequality, key_path_inequality};
use roughsum::levy_area::{
    area_between, area_direct_oracle, area_one_var, bracket, build_area_table, chen_defect,
    frobenius, pair_area_table, polyline_area, rough_norm_sq, rough_norm_sq_streaming,
};
use roughsum::LatticePath;

fn path(min_n: usize, max_n: usize, dim: usize) -> impl Strategy<Value = LatticePath> {
    (min_n..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(-3.0f64..3.0, (n + 1) * dim)
            .prop_map(move |v| LatticePath::from_flat(dim, v).unwrap())
    })
}

fn two_paths(max_n: usize, dim: usize) -> impl Strategy<Value = (LatticePath, LatticePath)> {
    (1..=max_n).prop_flat_map(move |n| {
        let v = prop::collection::vec(-3.0f64..3.0, (n + 1) * dim);
        (v.clone(), v).prop_map(move |(a, b)| {
            (
                LatticePath::from_flat(dim, a).unwrap(),
                LatticePath::from_flat(dim, b).unwrap(),
            )
        })
    })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn sum_all(parts: &[&[f64]]) -> Vec<f64> {
    let mut out = vec![0.0; parts[0].len()];
    for p in parts {
        for (o, x) in out.iter_mut().zip(*p) {
            *o += x;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn table_matches_oracle_and_is_antisymmetric(path in path(1, 40, 3)) {
        let table = build_area_table(&path).unwrap();
        let d = path.dim();
        for i in 0..=path.n() {
            prop_assert!(table.get(i, i).iter().all(|&x| x == 0.0));
            for j in i..=path.n() {
                let a = table.get(i, j);
                prop_assert!(max_abs_diff(a, &area_direct_oracle(&path, i, j).unwrap()) < 1e-11);
                for r in 0..d {
                    for c in 0..d {
                        prop_assert!((a[r * d + c] + a[c * d + r]).abs() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn chen_identity_on_integer_triples(path in path(2, 30, 2)) {
        let table = build_area_table(&path).unwrap();
        let n = path.n();
        for s in 0..=n {
            for u in s..=n {
                for t in u..=n {
                    prop_assert!(chen_defect(&table, &path, s, u, t).unwrap() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn chen_identity_at_real_times(path in path(1, 30, 2), f in prop::array::uniform3(0.0f64..1.0)) {
        let n = path.n() as f64;
        let mut t = f.map(|x| x * n);
        t.sort_by(f64::total_cmp);
        let [s, u, e] = t;
        let whole = area_between(&path, s, e).unwrap();
        let xs = path.eval(s).unwrap();
        let xu = path.eval(u).unwrap();
        let xe = path.eval(e).unwrap();
        let d1: Vec<f64> = xu.iter().zip(&xs).map(|(a, b)| a - b).collect();
        let d2: Vec<f64> = xe.iter().zip(&xu).map(|(a, b)| a - b).collect();
        let cross: Vec<f64> = bracket(&d1, &d2).iter().map(|x| 0.5 * x).collect();
        let parts = sum_all(&[&area_between(&path, s, u).unwrap(), &area_between(&path, u, e).unwrap(), &cross]);
        prop_assert!(max_abs_diff(&whole, &parts) < 1e-10);
    }

    #[test]
    fn integer_times_match_table(path in path(1, 30, 2), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let table = build_area_table(&path).unwrap();
        let (mut a, mut b) = (i.index(path.n() + 1), j.index(path.n() + 1));
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let real = area_between(&path, a as f64, b as f64).unwrap();
        prop_assert!(max_abs_diff(&real, table.get(a, b)) < 1e-12);
        let points: Vec<Vec<f64>> = (a..=b).map(|k| path.point(k).to_vec()).collect();
        prop_assert!(max_abs_diff(&polyline_area(&points), table.get(a, b)) < 1e-12);
    }

    #[test]
    fn scaling_and_reversal(path in path(1, 30, 2)) {
        let n = path.n();
        let base = build_area_table(&path).unwrap();
        let scaled = LatticePath::from_flat(2, path.as_flat().iter().map(|x| 3.0 * x).collect()).unwrap();
        let st = build_area_table(&scaled).unwrap();
        let rows: Vec<Vec<f64>> = (0..=n).rev().map(|k| path.point(k).to_vec()).collect();
        let reversed = LatticePath::from_rows(&rows).unwrap();
        let rt = build_area_table(&reversed).unwrap();
        let a = base.get(0, n);
        prop_assert!(max_abs_diff(st.get(0, n), &a.iter().map(|x| 9.0 * x).collect::<Vec<_>>()) <= 1e-12 * frobenius(a).max(1.0) * 9.0);
        prop_assert!((rt.get(0, n)[1] + a[1]).abs() < 1e-11);
    }

    #[test]
    fn closed_polygon_area_is_shoelace(path in path(2, 30, 2)) {
        let mut rows = path.rows();
        rows.push(rows[0].clone());
        let closed = LatticePath::from_rows(&rows).unwrap();
        let table = build_area_table(&closed).unwrap();
        let shoelace: f64 = rows.windows(2).map(|w| w[0][0] * w[1][1] - w[1][0] * w[0][1]).sum::<f64>() / 2.0;
        prop_assert!((table.get(0, closed.n())[1] - shoelace).abs() < 1e-11);
    }

    #[test]
    fn pair_area_decomposes_sum_area((p1, p2) in two_paths(25, 2)) {
        let sum = LatticePath::from_flat(2, p1.as_flat().iter().zip(p2.as_flat()).map(|(a, b)| a + b).collect()).unwrap();
        let (t, t11, t22) = (build_area_table(&sum).unwrap(), build_area_table(&p1).unwrap(), build_area_table(&p2).unwrap());
        let (t12, t21) = (pair_area_table(&p1, &p2).unwrap(), pair_area_table(&p2, &p1).unwrap());
        let same = pair_area_table(&p1, &p1).unwrap();
        let n = p1.n();
        for i in 0..=n {
            for j in i..=n {
                let parts = sum_all(&[t11.get(i, j), t22.get(i, j), t12.get(i, j), t21.get(i, j)]);
                prop_assert!(max_abs_diff(t.get(i, j), &parts) < 1e-10);
                prop_assert!(max_abs_diff(same.get(i, j), t11.get(i, j)) < 1e-12);
            }
        }
    }

    #[test]
    fn recurring_pair_area_is_additive((p1, p2) in two_paths(30, 2), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..6)) {
        let n = p1.n();
        let mut knots: Vec<usize> = picks.iter().map(|i| i.index(n + 1)).collect();
        knots.sort_unstable();
        knots.dedup();
        prop_assume!(knots.len() >= 2);
        // force p2 to revisit the same point at every knot
        let mut rows = p2.rows();
        for &k in &knots {
            rows[k] = vec![0.5, -0.25];
        }
        let p2 = LatticePath::from_rows(&rows).unwrap();
        let t12 = pair_area_table(&p1, &p2).unwrap();
        let pieces: Vec<&[f64]> = knots.windows(2).map(|w| t12.get(w[0], w[1])).collect();
        let whole = t12.get(knots[0], *knots.last().unwrap());
        prop_assert!(max_abs_diff(whole, &sum_all(&pieces)) < 1e-11);
    }

    #[test]
    fn rough_norm_modes_agree(path in path(1, 40, 2)) {
        let table = build_area_table(&path).unwrap();
        let full = path.full();
        let a = rough_norm_sq(&path, &table, full).unwrap();
        let b = rough_norm_sq_streaming(&path, full).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn key_inequalities_hold(path in path(2, 64, 2)) {
        let knots = dyadic_knots(path.n());
        prop_assert!(key_path_inequality(&path, &knots).unwrap().holds(1e-12));
        prop_assert!(key_area_inequality(&path, &knots).unwrap().holds(1e-12));
    }
}

#[test]
fn hand_examples() {
    let line = LatticePath::from_scalars(&[0.0, 1.0, 0.0, 1.0]).unwrap();
    let t = build_area_table(&line).unwrap();
    assert!((0..=3).all(|j| t.get(0, j) == [0.0]));
    let full = line.full();
    assert_eq!(rough_norm_sq(&line, &t, full).unwrap(), 3.0);

    let corner = LatticePath::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
    assert_eq!(build_area_table(&corner).unwrap().get(0, 2)[1], 0.5);
    let table = build_area_table(&corner).unwrap();
    let norm = rough_norm_sq(&corner, &table, corner.full()).unwrap();
    assert!((norm - (2.0 + 0.5f64.sqrt())).abs() < 1e-15);

    let triangle =
        LatticePath::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
    assert!((build_area_table(&triangle).unwrap().get(0, 3)[1] - 0.5).abs() < 1e-15);

    let still = LatticePath::from_rows(&vec![vec![1.0, 2.0]; 3]).unwrap();
    let zero = pair_area_table(&corner, &still).unwrap();
    assert!(zero.get(0, 2).iter().all(|&x| x == 0.0));
    assert_eq!(rough_norm_sq_streaming(&still, still.full()).unwrap(), 0.0);
    assert_eq!(area_one_var(&still, still.full()).unwrap().power_sum, 0.0);
}
