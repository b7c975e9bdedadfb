//! Dense reference implementations used only by tests. Everything here builds
//! explicit full-register matrices and shares no code with the simulator
//! kernels.
#![allow(dead_code)]

use fqh_core::seed::component_rng;
use fqh_core::{Scalar, C};
use num_complex::Complex64;

pub type Dense = Vec<Vec<Complex64>>;

pub fn zeros(n: usize) -> Dense {
    vec![vec![Complex64::new(0.0, 0.0); n]; n]
}

pub fn eye(n: usize) -> Dense {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn from_entries(dim: usize, entries: &[C<f64>]) -> Dense {
    (0..dim).map(|r| entries[r * dim..(r + 1) * dim].to_vec()).collect()
}

/// Kronecker product `a ⊗ b`; `b` occupies the low-order index bits.
pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (na, nb) = (a.len(), b.len());
    let mut out = zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            for k in 0..nb {
                for l in 0..nb {
                    out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn apply(m: &Dense, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// `I_{2^(n-target-1)} ⊗ gate ⊗ I_{2^target}` for an n-qubit register.
pub fn embed_single(gate: &Dense, target: usize, n: usize) -> Dense {
    kron(&kron(&eye(1 << (n - target - 1)), gate), &eye(1 << target))
}

/// Permutation matrix that maps basis index `i` to `perm(i)`.
pub fn permutation(n_states: usize, perm: impl Fn(usize) -> usize) -> Dense {
    let mut m = zeros(n_states);
    for i in 0..n_states {
        m[perm(i)][i] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Controlled gate built as |0><0|_c ⊗ I + |1><1|_c ⊗ U, where the targets
/// and control are first swapped into a canonical position by a permutation.
pub fn controlled(gate: &Dense, control: usize, targets: &[usize], n: usize) -> Dense {
    let k = targets.len();
    // canonical order: targets on qubits 0..k (targets[0] lowest), control on k, rest above
    let mut order: Vec<usize> = targets.to_vec();
    order.push(control);
    order.extend((0..n).filter(|q| !targets.contains(q) && *q != control));
    // to_canonical maps an index in the natural layout to the canonical layout
    let to_canonical = |i: usize| -> usize { order.iter().enumerate().map(|(slot, &q)| ((i >> q) & 1) << slot).sum() };
    let p = permutation(1 << n, to_canonical);
    let mut p_inv = zeros(1 << n);
    for i in 0..1 << n {
        for j in 0..1 << n {
            p_inv[i][j] = p[j][i];
        }
    }
    let mut proj0 = zeros(2);
    proj0[0][0] = Complex64::new(1.0, 0.0);
    let mut proj1 = zeros(2);
    proj1[1][1] = Complex64::new(1.0, 0.0);
    let cu_small = {
        let a = kron(&proj0, &eye(1 << k));
        let b = kron(&proj1, gate);
        let mut s = zeros(2 << k);
        for i in 0..2 << k {
            for j in 0..2 << k {
                s[i][j] = a[i][j] + b[i][j];
            }
        }
        s
    };
    let canonical = kron(&eye(1 << (n - k - 1)), &cu_small);
    matmul(&p_inv, &matmul(&canonical, &p))
}

pub fn hadamard() -> Dense {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
    ]
}

pub fn random_state(n_qubits: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = component_rng(seed, 99);
    let mut v: Vec<Complex64> = (0..1 << n_qubits)
        .map(|_| {
            Complex64::new(
                f64::sample_standard_normal(&mut rng),
                f64::sample_standard_normal(&mut rng),
            )
        })
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Walk oracle: dense step operator `S · (C ⊗ I_pos)` per bit pair, from
/// |x=0, coin=0>, on n_pos position qubits plus the coin above them.
pub fn walk_oracle(bits: &[bool], theta: [f64; 4], n_pos: usize) -> Vec<Complex64> {
    let n_nodes = 1 << n_pos;
    let n = n_pos + 1;
    // conditional shift: |x,0> -> |x+1,0>, |x,1> -> |x-1,1>
    let shift = permutation(1 << n, |i| {
        let x = i % n_nodes;
        let c = i / n_nodes;
        let nx = if c == 0 {
            (x + 1) % n_nodes
        } else {
            (x + n_nodes - 1) % n_nodes
        };
        c * n_nodes + nx
    });
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
    v[0] = Complex64::new(1.0, 0.0);
    for pair in bits.chunks(2) {
        let idx = (pair[0] as usize) * 2 + pair[1] as usize;
        let (s, c) = theta[idx].sin_cos();
        let coin = vec![
            vec![Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
            vec![Complex64::new(s, 0.0), Complex64::new(-c, 0.0)],
        ];
        let step = matmul(&shift, &kron(&coin, &eye(n_nodes)));
        v = apply(&step, &v);
    }
    v
}
