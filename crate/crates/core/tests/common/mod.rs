#![allow(dead_code)]

use certichan::channels::{mixed_unitary_channel, QuantumChannel};
use certichan::linalg::pauli::{i2, x};
use certichan::linalg::ComplexMatrix;
use certichan::povm::Povm;
use certichan::random::{random_channel, random_povm_effects, recombine_kraus, SeededRng};
use rand::Rng;

pub fn mix_ix() -> QuantumChannel {
    mixed_unitary_channel(&[0.5, 0.5], &[i2(), x()]).unwrap()
}

pub fn flip() -> QuantumChannel {
    QuantumChannel::from_kraus(vec![x()]).unwrap()
}

/// Kraus list `{√p E_i} ∪ {√(1−p) F_j}`.
pub fn mixture(a: &QuantumChannel, b: &QuantumChannel, p: f64) -> QuantumChannel {
    let mut kraus: Vec<ComplexMatrix> = a.kraus().iter().map(|k| k.scale_real(p.sqrt())).collect();
    kraus.extend(b.kraus().iter().map(|k| k.scale_real((1.0 - p).sqrt())));
    QuantumChannel::from_kraus(kraus).unwrap()
}

/// Independent random channels; the alternative's Kraus rank stays below
/// `d²` so its span is a proper subspace and generically misses the null span.
pub fn generic_pair(d: usize, rng: &mut SeededRng) -> (QuantumChannel, QuantumChannel) {
    let r0 = rng.random_range(1..=d * d);
    let r1 = rng.random_range(1..d * d);
    (random_channel(d, r0, rng).unwrap(), random_channel(d, r1, rng).unwrap())
}

/// Pair with `supp(null) ⊆ supp(alt)` by construction: the alternative is a
/// mixture containing the null channel, with its Kraus list scrambled by a
/// random isometry.
pub fn nested_pair(d: usize, rng: &mut SeededRng) -> (QuantumChannel, QuantumChannel) {
    let r0 = rng.random_range(1..=d);
    let null = random_channel(d, r0, rng).unwrap();
    let r2 = rng.random_range(1..=d);
    let other = random_channel(d, r2, rng).unwrap();
    let p = rng.random_range(0.05..0.95);
    let alt = mixture(&null, &other, p);
    let extra = rng.random_range(0..=2);
    let alt = recombine_kraus(&alt, alt.kraus_count() + extra, rng).unwrap();
    (null, alt)
}

/// Random POVM with `m` effects of random ranks.
pub fn random_povm(d: usize, m: usize, rng: &mut SeededRng) -> Povm {
    loop {
        let ranks: Vec<usize> = (0..m).map(|_| rng.random_range(1..=d)).collect();
        if ranks.iter().sum::<usize>() >= d {
            return Povm::new(random_povm_effects(d, &ranks, rng).unwrap()).unwrap();
        }
    }
}

/// `N_i = t M_i + (1 − t) Q_i`, so `supp(M_i) ⊆ supp(N_i)` for every `i`.
pub fn povm_mixture(p: &Povm, q: &Povm, t: f64) -> Povm {
    let effects = p
        .effects()
        .iter()
        .zip(q.effects())
        .map(|(a, b)| &a.scale_real(t) + &b.scale_real(1.0 - t))
        .collect();
    Povm::new(effects).unwrap()
}
