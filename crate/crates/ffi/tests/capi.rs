use std::ffi::CStr;
use std::ptr;

use matroot_ffi::*;

fn new_matrix(rows: usize, cols: usize, data: &[f64]) -> *mut MatrootMatrix {
    let mut out = ptr::null_mut();
    let status = unsafe { matroot_matrix_new(rows, cols, data.as_ptr(), &mut out) };
    assert_eq!(status, MatrootStatus::Ok);
    out
}

fn data(m: *const MatrootMatrix) -> Vec<f64> {
    unsafe {
        let len = matroot_matrix_rows(m) * matroot_matrix_cols(m);
        let mut buf = vec![0.0; len];
        assert_eq!(
            matroot_matrix_copy_data(m, buf.as_mut_ptr(), len),
            MatrootStatus::Ok
        );
        buf
    }
}

fn square(x: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = (0..n).map(|k| x[i * n + k] * x[k * n + j]).sum();
        }
    }
    out
}

fn close(x: &[f64], y: &[f64], tol: f64) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| (a - b).abs() <= tol)
}

fn last_error() -> Option<String> {
    let p = matroot_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn involutory_root_squares_back() {
    // Two copies of an involution with one -1 eigenvalue: -1 has multiplicity 2.
    let a = [
        3.0, 2.0, 0.0, 0.0, -4.0, -3.0, 0.0, 0.0, 0.0, 0.0, 3.0, 2.0, 0.0, 0.0, -4.0, -3.0,
    ];
    let m = new_matrix(4, 4, &a);
    let mut r = ptr::null_mut();
    unsafe {
        let tol = matroot_tolerances_default();
        assert_eq!(matroot_involutory_root(m, &tol, &mut r), MatrootStatus::Ok);
        assert!(last_error().is_none());
        assert!(close(&square(&data(r), 4), &a, 1e-12));
        matroot_matrix_free(r);
        matroot_matrix_free(m);
    }
}

#[test]
fn odd_minus_count_reports_status_and_message() {
    let m = new_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let mut r = ptr::null_mut();
    unsafe {
        let status = matroot_involutory_root(m, ptr::null(), &mut r);
        assert_eq!(status, MatrootStatus::OddNegativeMultiplicity);
        assert!(r.is_null());
        let name = CStr::from_ptr(matroot_status_name(status))
            .to_str()
            .unwrap();
        assert_eq!(name, "OddNegativeMultiplicity");
        assert!(last_error().unwrap().contains("odd multiplicity"));
        matroot_matrix_free(m);
    }
}

#[test]
fn symmetric_and_orthogonal_roots() {
    unsafe {
        let s = [-2.0, 0.0, 0.0, -2.0];
        let m = new_matrix(2, 2, &s);
        let mut r = ptr::null_mut();
        assert_eq!(
            matroot_symmetric_root(m, ptr::null(), &mut r),
            MatrootStatus::Ok
        );
        assert!(close(&square(&data(r), 2), &s, 1e-12));
        matroot_matrix_free(r);
        matroot_matrix_free(m);

        let (c, sn) = (0.3f64.cos(), 0.3f64.sin());
        let q = [c, -sn, sn, c];
        let m = new_matrix(2, 2, &q);
        let mut r = ptr::null_mut();
        assert_eq!(
            matroot_orthogonal_root(m, ptr::null(), &mut r),
            MatrootStatus::Ok
        );
        assert!(close(
            &data(r),
            &[0.15f64.cos(), -0.15f64.sin(), 0.15f64.sin(), 0.15f64.cos()],
            1e-12
        ));
        let mut class = MatrootOrthogonalClass::NoRealRootConstruction;
        let mut eligible = false;
        assert_eq!(
            matroot_classify_orthogonal(m, ptr::null(), &mut class, &mut eligible),
            MatrootStatus::Ok
        );
        assert_eq!(class, MatrootOrthogonalClass::HasRealOrthogonalRoot);
        assert!(eligible);
        matroot_matrix_free(r);
        matroot_matrix_free(m);
    }
}

#[test]
fn tower_levels() {
    unsafe {
        let q = [0.0, -1.0, 1.0, 0.0];
        let m = new_matrix(2, 2, &q);
        let mut t = ptr::null_mut();
        assert_eq!(
            matroot_tower_new(m, 3, ptr::null(), &mut t),
            MatrootStatus::Ok
        );
        assert_eq!(matroot_tower_depth(t), 3);
        let mut r = ptr::null_mut();
        assert_eq!(matroot_tower_level_root(t, 0, &mut r), MatrootStatus::Ok);
        assert!(close(&data(r), &q, 1e-12));
        matroot_matrix_free(r);
        assert_eq!(matroot_tower_level_root(t, 2, &mut r), MatrootStatus::Ok);
        let phi = std::f64::consts::FRAC_PI_8;
        assert!(close(
            &data(r),
            &[phi.cos(), -phi.sin(), phi.sin(), phi.cos()],
            1e-12
        ));
        matroot_matrix_free(r);
        assert_eq!(
            matroot_tower_level_root(t, 4, &mut r),
            MatrootStatus::InvalidParameter
        );
        matroot_tower_free(t);

        assert_eq!(
            matroot_tower_new(m, matroot_max_tower_depth() + 1, ptr::null(), &mut t),
            MatrootStatus::InvalidParameter
        );
        matroot_matrix_free(m);
    }
}

#[test]
fn block_idempotent_and_involution() {
    unsafe {
        let a = new_matrix(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let b = new_matrix(2, 1, &[1.0, 0.0]);
        let c = new_matrix(1, 2, &[1.0, 0.0]);
        let d = new_matrix(1, 1, &[2.0]);
        let mut p = ptr::null_mut();
        assert_eq!(
            matroot_block_idempotent(a, b, c, d, ptr::null(), &mut p),
            MatrootStatus::Ok
        );
        let expected = [2.0, 0.0, -1.0, 0.0, 1.0, 0.0, 2.0, 0.0, -1.0];
        assert!(close(&data(p), &expected, 1e-12));
        let mut yes = false;
        assert_eq!(
            matroot_is_idempotent(p, ptr::null(), &mut yes),
            MatrootStatus::Ok
        );
        assert!(yes);
        let mut t = ptr::null_mut();
        assert_eq!(
            matroot_involutory_from_idempotent(p, ptr::null(), &mut t),
            MatrootStatus::Ok
        );
        assert_eq!(
            matroot_is_involutory(t, ptr::null(), &mut yes),
            MatrootStatus::Ok
        );
        assert!(yes);
        let mut det = 0.0;
        assert_eq!(matroot_det(t, ptr::null(), &mut det), MatrootStatus::Ok);
        // Rank 2 of 3: eigenvalues 1, 1, -1.
        assert!((det + 1.0).abs() < 1e-12);

        // D singular.
        let zero = new_matrix(1, 1, &[0.0]);
        let mut bad = ptr::null_mut();
        assert_eq!(
            matroot_block_idempotent(a, b, c, zero, ptr::null(), &mut bad),
            MatrootStatus::SingularBlock
        );
        assert!(bad.is_null());
        for m in [a, b, c, d, p, t, zero] {
            matroot_matrix_free(m);
        }
    }
}

#[test]
fn argument_errors() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(
            matroot_matrix_new(2, 2, ptr::null(), &mut out),
            MatrootStatus::NullPointer
        );
        assert_eq!(
            matroot_matrix_new(2, 2, [1.0, f64::NAN, 0.0, 1.0].as_ptr(), &mut out),
            MatrootStatus::NonFinite
        );
        assert_eq!(
            matroot_matrix_new(0, 2, [1.0].as_ptr(), &mut out),
            MatrootStatus::DimensionMismatch
        );
        assert_eq!(
            matroot_involutory_root(ptr::null(), ptr::null(), &mut out),
            MatrootStatus::NullPointer
        );

        let m = new_matrix(2, 3, &[1.0; 6]);
        assert_eq!(
            matroot_involutory_root(m, ptr::null(), ptr::null_mut()),
            MatrootStatus::NullPointer
        );
        assert_eq!(
            matroot_orthogonal_root(m, ptr::null(), &mut out),
            MatrootStatus::NotSquare
        );
        let mut small = [0.0; 5];
        assert_eq!(
            matroot_matrix_copy_data(m, small.as_mut_ptr(), small.len()),
            MatrootStatus::DimensionMismatch
        );
        let bad_tol = MatrootTolerances {
            eq_rtol: 2.0,
            rank_tol: 1e-10,
            pair_tol: 1e-8,
        };
        let mut flag = false;
        assert_eq!(
            matroot_is_orthogonal(m, &bad_tol, &mut flag),
            MatrootStatus::InvalidParameter
        );
        matroot_matrix_free(m);
        matroot_matrix_free(ptr::null_mut());
        matroot_tower_free(ptr::null_mut());
        assert_eq!(matroot_matrix_rows(ptr::null()), 0);
    }
}

#[test]
fn parses_text_format() {
    let text = c"2 2\n0 1\n1 0\n";
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(
            matroot_matrix_from_text(text.as_ptr(), &mut m),
            MatrootStatus::Ok
        );
        assert_eq!(data(m), vec![0.0, 1.0, 1.0, 0.0]);
        matroot_matrix_free(m);
        assert_eq!(
            matroot_matrix_from_text(c"2 2\n1 2\n".as_ptr(), &mut m),
            MatrootStatus::Parse
        );
    }
}

#[test]
fn status_names_are_distinct() {
    let names: std::collections::BTreeSet<String> = (0..=20)
        .map(|i: i32| {
            // Values 0..=20 are exactly the declared discriminants.
            let s: MatrootStatus = unsafe { std::mem::transmute(i) };
            unsafe { CStr::from_ptr(matroot_status_name(s)) }
                .to_string_lossy()
                .into_owned()
        })
        .collect();
    assert_eq!(names.len(), 21);
}
