use padtors::elliptic::CurveAt;
use padtors::family::FamilyModel;
use padtors::{Error, Padic};

const P: u64 = 5;

fn model() -> FamilyModel {
    FamilyModel::build(P, 40, 40).unwrap()
}

fn t_of(k: i64, v: i64) -> Padic {
    &Padic::from_i64(k, P, 40) * &Padic::p_power(P, v, 40 + v)
}

#[test]
fn jinv_series_matches_the_curve() {
    let m = model();
    for (i, v) in [(1, 4), (2, 5), (3, 4), (4, 6), (7, 5), (11, 4), (12, 7), (13, 5), (17, 8), (19, 4)] {
        let t = t_of(i, v);
        let CurveAt::Smooth(e) = m.curve_at(&t).unwrap() else { panic!("singular fiber at t = {t}") };
        let direct = e.j_inv().unwrap();
        let series = m.jinv_e_series().eval(&t).unwrap();
        let d = direct - &series;
        assert!(d.is_zero() && d.prec() >= m.prec() - 6, "t = {t}: {d}");
    }
    // val t = 5 gives val(1/j) = 1 + 5
    let e = m.curve_at(&t_of(2, 5)).unwrap().smooth().unwrap();
    assert_eq!(e.j_inv().unwrap().val(), 6);
}

#[test]
fn shat_stays_near_p() {
    let m = model();
    for k in [1, 2, 3, 4, 6] {
        let t = t_of(k, 5);
        let s = m.shat_eval(&t).unwrap();
        assert!((&s.z - &Padic::from_i64(5, P, 40)).val() >= 4);
        assert_eq!(s.branch, 1);
        // the section maps onto eta_q(shat)
        let x = m.tate().x_coord(&s.q, &s.z).unwrap();
        assert!((&(&x * &s.lambda.square()) - m.section_x()).is_zero());
    }
}

#[test]
fn shat_linear_term_matches_difference_quotient() {
    let m = model();
    let h = t_of(1, 12);
    let s0 = m.shat_eval(&Padic::exact_zero(P)).unwrap().z;
    let s1 = m.shat_eval(&h).unwrap().z;
    let slope = (&s1 - &s0).try_div(&h).unwrap();
    let d = &slope - &m.shat_series().coeff(1);
    assert!(d.val() >= 8, "{d}");
}

#[test]
fn exact_derivative_matches_difference_quotient() {
    let m = model();
    let n = 6;
    let t = m.seed(n).unwrap();
    let h = t_of(1, 14);
    let f0 = m.f_n(n, &t).unwrap();
    let f1 = m.f_n(n, &(&t + &h)).unwrap();
    let quotient = (&f1 - &f0).try_div(&h).unwrap();
    let exact = m.f_n_derivative(n, &t).unwrap();
    assert_eq!(exact.val(), 1);
    assert!((&quotient - &exact).val() >= 10);
}

#[test]
fn seed_is_first_order_solution() {
    let m = model();
    for n in 4..=8 {
        let s = m.seed(n).unwrap();
        assert_eq!(s.val(), n as i64 - 1);
        assert_eq!(s.leading_digit(), Some(1));
    }
}

#[test]
fn single_record_report_and_json_shape() {
    let m = model();
    let rep = m.accumulation_report(6, 6).unwrap();
    assert_eq!(rep.records.len(), 1);
    let with = serde_json::to_value(&rep).unwrap();
    let rec = &with["records"][0];
    for key in ["n", "t", "val_t", "order_certificate", "newton_trace"] {
        assert!(rec.get(key).is_some(), "{key}");
    }
    let without = serde_json::to_value(rep.without_traces()).unwrap();
    assert!(without["records"][0].get("newton_trace").is_none());
    assert_eq!(without["summary"]["valuations"], serde_json::json!([5]));
    assert!(without["summary"]["min_separation_val"].is_null());
}

#[test]
fn preconditions() {
    let m = model();
    assert!(matches!(m.solve_tn(3), Err(Error::Domain(_))));
    assert!(matches!(m.solve_tn(21), Err(Error::InvalidPrecision(_))));
    assert!(m.accumulation_report(6, 5).is_err());
    assert!(m.curve_at(&t_of(1, 2)).is_err());
    assert!(FamilyModel::build(3, 40, 16).is_err());
}
