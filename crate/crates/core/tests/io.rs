use ccd_core::io::{read_dataset, write_dataset};
use ccd_core::normalize::{column_scales, normalize_med_madn, MADN_CONSTANT};
use ccd_core::rng::stream_rng;
use ccd_core::{Dataset, Error};
use proptest::prelude::*;
use rand::Rng;

// ------------------------------------------------------------------ normalize

#[test]
fn three_values_map_to_plus_minus_the_constant() {
    let data = Dataset::new(vec![vec![1.0], vec![2.0], vec![3.0]]).unwrap();
    let (out, scales) = normalize_med_madn(&data).unwrap();
    assert_eq!(scales[0].median, 2.0);
    assert!((scales[0].madn - 1.0 / 0.6745).abs() < 1e-12);
    let got: Vec<f64> = out.coords().to_vec();
    for (g, w) in got.iter().zip([-0.6745, 0.0, 0.6745]) {
        assert!((g - w).abs() < 1e-12, "{got:?}");
    }
}

#[test]
fn symmetric_columns_center_exactly() {
    let data = Dataset::new(vec![vec![-4.0, 10.0], vec![-1.0, 11.0], vec![1.0, 12.0], vec![4.0, 13.0], vec![0.0, 14.0]]).unwrap();
    let (out, _) = normalize_med_madn(&data).unwrap();
    let scales = column_scales(&out);
    assert_eq!(scales[0].median, 0.0);
    assert_eq!(scales[1].median, 0.0);
}

#[test]
fn constant_columns_collapse_to_zero() {
    let data = Dataset::new(vec![vec![5.0, 1.0], vec![5.0, 2.0], vec![5.0, 4.0]]).unwrap();
    let (out, scales) = normalize_med_madn(&data).unwrap();
    assert!(scales[0].constant && !scales[1].constant);
    assert!(out.points().all(|p| p[0] == 0.0));
}

#[test]
fn labels_survive_normalization() {
    let data = Dataset::new(vec![vec![1.0], vec![2.0], vec![9.0]]).unwrap().with_labels(vec![false, false, true]).unwrap();
    assert_eq!(normalize_med_madn(&data).unwrap().0.labels(), Some(&[false, false, true][..]));
}

#[test]
fn one_row_cannot_be_scaled() {
    assert!(normalize_med_madn(&Dataset::new(vec![vec![1.0]]).unwrap()).unwrap_err().is_input());
}

#[test]
fn one_wild_value_barely_moves_the_robust_scale() {
    let mut rng = stream_rng(1, &[]);
    let clean: Vec<f64> = (0..200).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
    let mut dirty = clean.clone();
    dirty[0] = 1e6;
    let madn = |v: &[f64]| {
        let d = Dataset::new(v.iter().map(|&x| vec![x]).collect()).unwrap();
        column_scales(&d)[0].madn
    };
    let sd = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
    };
    assert!((madn(&dirty) / madn(&clean) - 1.0).abs() < 0.05);
    assert!(sd(&dirty) / sd(&clean) > 1000.0);
}

proptest! {
    #[test]
    fn normalization_is_affine_invariant(seed in any::<u64>(), a in 0.1f64..100.0, b in -50.0f64..50.0) {
        let mut rng = stream_rng(seed, &[]);
        let xs: Vec<f64> = (0..31).map(|_| rng.random::<f64>()).collect();
        let d1 = Dataset::new(xs.iter().map(|&x| vec![x]).collect()).unwrap();
        let d2 = Dataset::new(xs.iter().map(|&x| vec![a * x + b]).collect()).unwrap();
        let (o1, _) = normalize_med_madn(&d1).unwrap();
        let (o2, _) = normalize_med_madn(&d2).unwrap();
        for (p, q) in o1.coords().iter().zip(o2.coords()) {
            prop_assert!((p - q).abs() < 1e-8 * (1.0 + p.abs()));
        }
        // Median and MAD of a normalized column are 0 and the constant.
        let s = column_scales(&o1)[0];
        prop_assert!(s.median.abs() < 1e-12);
        prop_assert!((s.madn * MADN_CONSTANT - MADN_CONSTANT).abs() < 1e-9);
    }
}

// ------------------------------------------------------------------------ csv

#[test]
fn csv_round_trip_keeps_values_and_labels() {
    let mut rng = stream_rng(2, &[]);
    let pts: Vec<Vec<f64>> = (0..40).map(|_| (0..3).map(|_| rng.random::<f64>() * 1e3 - 500.0).collect()).collect();
    let labels: Vec<bool> = (0..40).map(|i| i % 7 == 0).collect();
    let data = Dataset::new(pts).unwrap().with_labels(labels).unwrap();
    let mut buf = Vec::new();
    write_dataset(&data, &mut buf).unwrap();
    assert!(String::from_utf8(buf.clone()).unwrap().starts_with("x1,x2,x3,label\n"));
    let back = read_dataset(&buf[..]).unwrap();
    assert_eq!(back.coords(), data.coords());
    assert_eq!(back.labels(), data.labels());
}

#[test]
fn unlabeled_csv() {
    let back = read_dataset("x1,x2\n1,2\n3.5,-4e2\n".as_bytes()).unwrap();
    assert_eq!(back.coords(), &[1.0, 2.0, 3.5, -400.0]);
    assert!(back.labels().is_none());
    let mut buf = Vec::new();
    write_dataset(&back, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "x1,x2\n1,2\n3.5,-400\n");
}

fn parse_row(text: &str) -> usize {
    match read_dataset(text.as_bytes()).unwrap_err() {
        Error::Parse { row, .. } => row,
        e => panic!("expected a parse error, got {e}"),
    }
}

#[test]
fn parse_errors_name_the_row() {
    assert_eq!(parse_row("x1,x2\n1,2\n3,abc\n"), 3);
    assert_eq!(parse_row("x1,label\n1,0\n2,1\n3,2\n"), 4);
    assert_eq!(parse_row("x1,x2\n1,2\n3\n"), 3);
    assert_eq!(parse_row("x1\n1\nNaN\n"), 3);
    assert_eq!(parse_row("x1,x2\n"), 2);
    assert!(read_dataset("label\n0\n".as_bytes()).unwrap_err().is_input());
}

#[test]
fn f32_datasets_write_too() {
    let data: Dataset<f32> = Dataset::new(vec![vec![0.5f64, 1.25]]).unwrap().cast();
    let mut buf = Vec::new();
    write_dataset(&data, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "x1,x2\n0.5,1.25\n");
}
