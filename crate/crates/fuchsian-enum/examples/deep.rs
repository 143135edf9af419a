//! Times a deep streaming pass over the modular group.
use fuchsian_enum::*;
use hyperbolic_core::UpperHalfPoint;

fn main() {
    let t: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(12.0);
    let en = Enumerator::new(&GroupPresentation::modular(), EnumOptions::default()).unwrap();
    let z = UpperHalfPoint::new(0.2, 0.3).unwrap();
    let t0 = std::time::Instant::now();
    let (s, r) =
        en.fold_tree(z, (-t).exp(), || 0.0, |a: &mut f64, h| *a += h.point.im * h.point.im, |a, b| *a += b).unwrap();
    println!("{s:.12} {r:?} {:?}", t0.elapsed());
    if t <= 15.0 {
        let mut s2 = 0.0;
        let r = en.visit(z, (-t).exp(), false, |r| s2 += r.height * r.height).unwrap();
        println!("{s2:.12} {r:?}");
    }
}
