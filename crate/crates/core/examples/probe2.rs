use isochrony::classify::{reconstruct, Classification};
use isochrony::rational::Rational;
use isochrony::potential::EvaluablePotential;
use isochrony::period::{find_well, turning_points};
use isochrony::quad;
use std::f64::consts::{FRAC_PI_2, PI};

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
    let e = 2.2f64;
    let tp = turning_points(&u, &w, e).unwrap();
    let (x1, x2) = (tp.x1, tp.x2);
    let width = x2 - x1;
    let slope1 = u.deriv(x1).abs();
    let slope2 = u.deriv(x2).abs();
    let r1 = e - u.eval(x1);
    let r2 = e - u.eval(x2);
    let tiny_d = 64.0 * f64::EPSILON * x1.abs().max(x2.abs()).max(width);
    let uu = u.clone();
    let f = move |phi: f64| {
        let c = phi.cos();
        let half = FRAC_PI_2 / 2.0 - phi / 2.0;
        let d1 = width * half.cos().powi(2);
        let d2 = width * half.sin().powi(2);
        let dmin = d1.min(d2);
        let mut s = if dmin < tiny_d {
            if d1 < d2 { slope1 * d1 } else { slope2 * d2 }
        } else {
            e - uu.eval(x1 + d1) - (r1 * d2 + r2 * d1) / width
        };
        if s <= 0.0 {
            s = if d1 < d2 { slope1 * d1 } else { slope2 * d2 };
            if s <= 0.0 { return 0.0; }
        }
        std::f64::consts::SQRT_2 * 0.5 * width * c / s.sqrt()
    };
    let mut breaks = Vec::new();
    for j in 1..=12 {
        let off = PI * 0.5f64.powi(j + 1);
        breaks.push(-FRAC_PI_2 + off);
        breaks.push(FRAC_PI_2 - off);
    }
    // endpoint microscope: f vs analytic limit
    let f_lim_left = std::f64::consts::SQRT_2 * width.sqrt() / slope1.sqrt();
    let f_lim_right = std::f64::consts::SQRT_2 * width.sqrt() / slope2.sqrt();
    println!("analytic limits: left {:.6} right {:.6}", f_lim_left, f_lim_right);
    for k in 0..28 {
        let t = 1e-12 * 3.0f64.powi(k);
        if t > 1e-4 { break; }
        let fl = f(-FRAC_PI_2 + t);
        let fr = f(FRAC_PI_2 - t);
        println!("t={:9.3e}  f_left/t={:12.6}  f_right/t={:12.6}", t, fl / t, fr / t);
    }
}
