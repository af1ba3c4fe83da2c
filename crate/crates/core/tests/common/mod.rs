use circulant_qms::CycleWeights;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random probability table with no identity mass, sampled uniformly from
/// the simplex over the remaining group elements.
pub fn random_weights(rng: &mut ChaCha8Rng, orders: &[usize]) -> CycleWeights {
    let dim: usize = orders.iter().product();
    let mut alpha: Vec<f64> = (0..dim)
        .map(|_| -rng.gen::<f64>().max(1e-12).ln())
        .collect();
    alpha[0] = 0.0;
    let total: f64 = alpha.iter().sum();
    for a in alpha.iter_mut() {
        *a /= total;
    }
    CycleWeights::new(orders, alpha).unwrap()
}

/// Random table with every off-identity weight at least `floor`.
pub fn random_weights_with_floor(
    rng: &mut ChaCha8Rng,
    orders: &[usize],
    floor: f64,
) -> CycleWeights {
    let dim: usize = orders.iter().product();
    let free = 1.0 - floor * (dim - 1) as f64;
    assert!(free > 0.0, "floor too large for this group");
    let mut alpha: Vec<f64> = (0..dim)
        .map(|_| -rng.gen::<f64>().max(1e-12).ln())
        .collect();
    alpha[0] = 0.0;
    let total: f64 = alpha.iter().sum();
    for (g, a) in alpha.iter_mut().enumerate() {
        *a = if g == 0 { 0.0 } else { floor + free * (*a / total) };
    }
    // Rounding drift: renormalize over the off-identity entries.
    let total: f64 = alpha.iter().sum();
    for a in alpha.iter_mut() {
        *a /= total;
    }
    CycleWeights::new(orders, alpha).unwrap()
}

/// Symmetrize a table: `alpha(g) <- (alpha(g) + alpha(-g))/2`.
pub fn symmetrized(w: &CycleWeights) -> CycleWeights {
    let rev = w.reversed();
    let alpha: Vec<f64> = w
        .alpha()
        .iter()
        .zip(rev.alpha())
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    CycleWeights::new(w.orders(), alpha).unwrap()
}
