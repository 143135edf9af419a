//! Compares the adaptive evaluation with the coprime-pair oracle.
use eisenstein::*;
use fuchsian_enum::GroupPresentation;
use hyperbolic_core::UpperHalfPoint;
use std::time::Instant;

fn main() {
    let z: UpperHalfPoint = std::env::args().nth(1).unwrap_or("0.2+0.3i".into()).parse().unwrap();
    let tol: f64 = std::env::args().nth(2).and_then(|a| a.parse().ok()).unwrap_or(1e-8);
    let s = SpectralParameter::real(2.0).unwrap();
    let t0 = Instant::now();
    let v = eisenstein_eval(&GroupPresentation::modular(), z, s, tol).unwrap();
    println!(
        "eval   {:.15} tail {:.3e} T {:.3} n {} {:?}",
        v.value.re,
        v.tail_bound,
        v.truncation_radius,
        v.cosets_used,
        t0.elapsed()
    );
    let t0 = Instant::now();
    let o = modular_oracle(z, s, 5000).unwrap();
    println!("oracle {:.15} tail {:.3e} {:?}", o.value.re, o.tail_bound, t0.elapsed());
    println!("rel {:.3e}", (v.value.re - o.value.re).abs() / o.value.re);
}
