use num_complex::Complex64;

/// Neumaier-compensated sum of reals.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    s: f64,
    c: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    pub fn merge(&mut self, o: CompensatedSum) {
        self.add(o.s);
        self.add(o.c);
    }

    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// Componentwise compensated complex sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        if z.im != 0.0 {
            self.im.add(z.im);
        }
    }

    pub fn merge(&mut self, o: ComplexSum) {
        self.re.merge(o.re);
        self.im.merge(o.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}
