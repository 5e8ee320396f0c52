//! Amplitude-pair kernels acting on the spin bits of a state vector.
//!
//! The chain occupies the `L` least significant bits of the amplitude index;
//! any higher bits (walker position and coin) are spectators. The same kernels
//! therefore evolve a bare spin register and every `(x, c)` block of a walk
//! state in one pass.

use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Visits every index pair `(i, i | mask)` with the `mask` bit clear in `i`.
#[inline]
fn for_each_pair(len: usize, mask: usize, mut f: impl FnMut(usize, usize)) {
    let mut base = 0;
    while base < len {
        for i in base..base + mask {
            f(i, i | mask);
        }
        base += mask << 1;
    }
}

/// Applies `prod_x exp(i angle X_x)` to the first `sites` bits.
pub fn field_rotation(amps: &mut [Complex64], sites: usize, angle: f64) {
    let (s, c) = libm::sincos(angle);
    let is = I * s;
    for x in 0..sites {
        for_each_pair(amps.len(), 1 << x, |i, j| {
            let (a, b) = (amps[i], amps[j]);
            amps[i] = a * c + b * is;
            amps[j] = b * c + a * is;
        });
    }
}

/// Applies `prod_x exp(i angle Z_{x-1} X_x Z_{x+1})` with periodic wrap.
pub fn cluster_rotation(amps: &mut [Complex64], sites: usize, angle: f64) {
    let (s, c) = libm::sincos(angle);
    let is = I * s;
    for x in 0..sites {
        let left = 1usize << ((x + sites - 1) % sites);
        let right = 1usize << ((x + 1) % sites);
        for_each_pair(amps.len(), 1 << x, |i, j| {
            let odd = ((i & left != 0) as u8) ^ ((i & right != 0) as u8);
            let coupling = if odd == 1 { -is } else { is };
            let (a, b) = (amps[i], amps[j]);
            amps[i] = a * c + b * coupling;
            amps[j] = b * c + a * coupling;
        });
    }
}

/// One period of the spin Floquet operator: field half, then cluster half.
pub fn floquet_step(amps: &mut [Complex64], sites: usize, j: f64, b: f64) {
    field_rotation(amps, sites, b / 2.0);
    cluster_rotation(amps, sites, j / 2.0);
}

/// Entries `(rho_00, rho_11, rho_01)` of the single-site reduced density
/// matrix, tracing out every other bit of the index.
pub fn site_density(amps: &[Complex64], site: usize) -> (f64, f64, Complex64) {
    let mut rho00 = 0.0;
    let mut rho11 = 0.0;
    let mut rho01 = Complex64::new(0.0, 0.0);
    for_each_pair(amps.len(), 1 << site, |i, j| {
        let (a, b) = (amps[i], amps[j]);
        rho00 += a.norm_sqr();
        rho11 += b.norm_sqr();
        rho01 += a * b.conj();
    });
    (rho00, rho11, rho01)
}

/// `<psi| prod_{x in mask} X_x |psi>`.
pub fn flip_expectation(amps: &[Complex64], mask: usize) -> f64 {
    amps.iter()
        .enumerate()
        .map(|(i, a)| (a.conj() * amps[i ^ mask]).re)
        .sum()
}

pub fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}
