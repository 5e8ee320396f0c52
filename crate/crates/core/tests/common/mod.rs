//! Dense-matrix and brute-force oracles shared by the integration tests.
//! Nothing here calls the amplitude kernels it is used to check.
#![allow(dead_code)]

use fcl_core::linalg::CMatrix;
use fcl_core::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> =
        (0..dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Single-qubit Pauli matrices as [[a, b], [c, d]].
pub fn pauli(axis: char) -> [[Complex64; 2]; 2] {
    match axis {
        'I' => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        'X' => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        'Y' => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        'Z' => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        _ => unreachable!(),
    }
}

/// Dense operator on `nbits` qubits acting with `ops[q]` on bit `q` (bit 0 least significant).
pub fn product_operator(nbits: usize, ops: &[(usize, [[Complex64; 2]; 2])]) -> CMatrix {
    let dim = 1 << nbits;
    let mut m = CMatrix::zeros(dim);
    for col in 0..dim {
        // Expand |col> through each factor.
        let mut terms = vec![(col, c(1.0, 0.0))];
        for &(bit, op) in ops {
            let mut next = Vec::with_capacity(terms.len() * 2);
            for (idx, amp) in terms {
                let b = (idx >> bit) & 1;
                for out in 0..2 {
                    let e = op[out][b];
                    if e != c(0.0, 0.0) {
                        next.push(((idx & !(1 << bit)) | (out << bit), amp * e));
                    }
                }
            }
            terms = next;
        }
        for (row, amp) in terms {
            m[(row, col)] += amp;
        }
    }
    m
}

pub fn add(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let data: Vec<Complex64> = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x + y).collect();
    CMatrix::from_rows(a.dim(), data).unwrap()
}

pub fn scale(a: &CMatrix, s: Complex64) -> CMatrix {
    CMatrix::from_rows(a.dim(), a.as_slice().iter().map(|x| x * s).collect()).unwrap()
}

/// `exp(a)` by scaling and squaring with a Taylor series.
pub fn expm(a: &CMatrix) -> CMatrix {
    let norm: f64 = a.as_slice().iter().map(|z| z.norm()).sum();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = scale(a, c(0.5f64.powi(squarings as i32), 0.0));
    let mut result = CMatrix::identity(a.dim());
    let mut term = CMatrix::identity(a.dim());
    for k in 1..30 {
        term = scale(&term.matmul(&scaled).unwrap(), c(1.0 / k as f64, 0.0));
        result = add(&result, &term);
    }
    for _ in 0..squarings {
        result = result.matmul(&result).unwrap();
    }
    result
}

/// Dense spin Floquet operator `exp(i J/2 sum ZXZ) exp(i B/2 sum X)`.
pub fn dense_spin_floquet(l: usize, j: f64, b: f64) -> CMatrix {
    let mut field = CMatrix::zeros(1 << l);
    let mut cluster = CMatrix::zeros(1 << l);
    for x in 0..l {
        field = add(&field, &product_operator(l, &[(x, pauli('X'))]));
        let ops = [((x + l - 1) % l, pauli('Z')), (x, pauli('X')), ((x + 1) % l, pauli('Z'))];
        cluster = add(&cluster, &product_operator(l, &ops));
    }
    let uc = expm(&scale(&cluster, c(0.0, j / 2.0)));
    let ub = expm(&scale(&field, c(0.0, b / 2.0)));
    uc.matmul(&ub).unwrap()
}

/// Dense walk-step operator `F W M C` on `L * 2 * 2^L`, index `(2x + c) 2^L + s`.
pub fn dense_walk_step(l: usize, j: f64, b: f64, jw: f64, theta: f64) -> CMatrix {
    let sdim = 1usize << l;
    let dim = 2 * l * sdim;
    let idx = |x: usize, coin: usize, s: usize| (2 * x + coin) * sdim + s;

    let mut coin = CMatrix::zeros(dim);
    let (st, ct) = theta.sin_cos();
    for x in 0..l {
        for s in 0..sdim {
            coin[(idx(x, 0, s), idx(x, 0, s))] = c(ct, 0.0);
            coin[(idx(x, 0, s), idx(x, 1, s))] = c(-st, 0.0);
            coin[(idx(x, 1, s), idx(x, 0, s))] = c(st, 0.0);
            coin[(idx(x, 1, s), idx(x, 1, s))] = c(ct, 0.0);
        }
    }

    let mut shift = CMatrix::zeros(dim);
    for x in 0..l {
        let xp = (x + 1) % l;
        for s in 0..sdim {
            // |x+1><x| (x) |0><1|  +  |x><x+1| (x) |1><0|
            shift[(idx(xp, 0, s), idx(x, 1, s))] = c(1.0, 0.0);
            shift[(idx(x, 1, s), idx(xp, 0, s))] = c(1.0, 0.0);
        }
    }

    // Coin is bit l of the (c, s) index inside a position block.
    let (sw, cw) = jw.sin_cos();
    let mut w_local = CMatrix::identity(2 * sdim);
    for site in 0..l {
        let tx = product_operator(l + 1, &[(l, pauli('X')), (site, pauli('X'))]);
        let factor = add(&scale(&CMatrix::identity(2 * sdim), c(cw, 0.0)), &scale(&tx, c(0.0, sw)));
        w_local = factor.matmul(&w_local).unwrap();
    }
    let f_spin = dense_spin_floquet(l, j, b);
    let mut w = CMatrix::zeros(dim);
    let mut f = CMatrix::zeros(dim);
    for x in 0..l {
        let off = 2 * x * sdim;
        for r in 0..2 * sdim {
            for col in 0..2 * sdim {
                w[(off + r, off + col)] = w_local[(r, col)];
            }
        }
        for coin_state in 0..2 {
            let off = (2 * x + coin_state) * sdim;
            for r in 0..sdim {
                for col in 0..sdim {
                    f[(off + r, off + col)] = f_spin[(r, col)];
                }
            }
        }
    }
    f.matmul(&w).unwrap().matmul(&shift).unwrap().matmul(&coin).unwrap()
}

/// Free walk on `2L` amplitudes `(x, c)` with the same coin and shift conventions.
pub fn one_particle_walk(l: usize, theta: f64, x0: usize, c0: usize, steps: usize) -> Vec<Vec<f64>> {
    let mut psi = vec![c(0.0, 0.0); 2 * l];
    psi[2 * x0 + c0] = c(1.0, 0.0);
    let (st, ct) = theta.sin_cos();
    let mut out = vec![prob(&psi, l)];
    for _ in 0..steps {
        let mut rotated = vec![c(0.0, 0.0); 2 * l];
        for x in 0..l {
            rotated[2 * x] = psi[2 * x] * ct - psi[2 * x + 1] * st;
            rotated[2 * x + 1] = psi[2 * x] * st + psi[2 * x + 1] * ct;
        }
        let mut moved = vec![c(0.0, 0.0); 2 * l];
        for x in 0..l {
            moved[2 * ((x + 1) % l)] = rotated[2 * x + 1];
            moved[2 * x + 1] = rotated[2 * ((x + 1) % l)];
        }
        psi = moved;
        out.push(prob(&psi, l));
    }
    out
}

fn prob(psi: &[Complex64], l: usize) -> Vec<f64> {
    (0..l).map(|x| psi[2 * x].norm_sqr() + psi[2 * x + 1].norm_sqr()).collect()
}

/// `<psi| O |psi>` for a dense operator.
pub fn expectation(op: &CMatrix, psi: &[Complex64]) -> Complex64 {
    let v = op.mul_vec(psi).unwrap();
    psi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum()
}

/// Fermion occupations `<f_k^dag f_k>` on the even-sector momenta, rebuilt from
/// spin amplitudes through the Jordan-Wigner two-point function.
///
/// `f_x^dag f_y = (1/4) (Z_x + iY_x) X_x X_{x+1} ... X_{y-1} (Z_y - iY_y)` for
/// `x < y`, `f_x^dag f_x = (1 - X_x) / 2`; the vacuum is `|+>^L`.
pub fn jordan_wigner_occupations(l: usize, psi: &[Complex64]) -> Vec<(f64, f64)> {
    let raise = [[c(1.0, 0.0), c(1.0, 0.0)], [c(-1.0, 0.0), c(-1.0, 0.0)]]; // Z + iY
    let lower = [[c(1.0, 0.0), c(-1.0, 0.0)], [c(1.0, 0.0), c(-1.0, 0.0)]]; // Z - iY
    let mut corr = vec![vec![c(0.0, 0.0); l]; l];
    for x in 0..l {
        let xs = expectation(&product_operator(l, &[(x, pauli('X'))]), psi);
        corr[x][x] = (c(1.0, 0.0) - xs) * 0.5;
        for y in x + 1..l {
            let mut ops = vec![(y, lower)];
            for z in (x + 1..y).rev() {
                ops.push((z, pauli('X')));
            }
            // (Z_x + iY_x) X_x applied last: acts on |psi> after the others.
            ops.push((x, pauli('X')));
            ops.push((x, raise));
            let v = expectation(&product_operator(l, &ops), psi) * 0.25;
            corr[x][y] = v;
            corr[y][x] = v.conj();
        }
    }
    let mut out = Vec::new();
    for n in (-(l as i64 - 1)..=(l as i64 - 1)).step_by(2) {
        let k = std::f64::consts::PI * n as f64 / l as f64;
        let mut occ = c(0.0, 0.0);
        for x in 0..l {
            for y in 0..l {
                occ += Complex64::from_polar(1.0, k * (x as f64 - y as f64)) * corr[x][y];
            }
        }
        out.push((k, occ.re / l as f64));
    }
    out
}
