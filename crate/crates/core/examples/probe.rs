use isochrony::classify::{reconstruct, Classification};
use isochrony::rational::Rational;
use isochrony::potential::EvaluablePotential;
use isochrony::period::{find_well, period_at};
use std::f64::consts::PI;

fn main() {
    let member = Classification::SingularIsochronous {
        omega_sq: Rational::from_int(9),
        c_sq: Rational::from_int(2),
        shift: Rational::from_int(-2),
        offset: Rational::from_int(-1),
    };
    let exact = reconstruct(&member).unwrap();
    let u = EvaluablePotential::from_rational(&exact, None);
    let w = find_well(&u).unwrap();
    println!("well: x_min={} u_min={}", w.x_min, w.u_min);
    let t_expect = 2.0 * PI / 3.0;
    let delta = 0.1f64.max(0.1 * w.u_min.abs());
    for i in 0..12 {
        let t = i as f64 / 11.0;
        let e = w.u_min + delta * 100f64.powf(t);
        let s = period_at(&u, &w, e).unwrap();
        println!("E={:9.5} T={:.12} rel_dev={:+.3e} err_est={:.2e}", e, s.period, (s.period - t_expect)/t_expect, s.err_estimate);
    }
}
