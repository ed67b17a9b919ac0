//! k-center completion: farthest-first traversal that starts from a set of
//! fixed centers whose balls already have a radius.
//!
//! Distances to a fixed center are discounted by that center's radius and
//! clamped at zero (discounted twice between two fixed centers). The resulting
//! `d'` is symmetric but not a metric.

use crate::instance::Instance;

/// Fixed centers (with radii) to be completed to `k` centers.
#[derive(Debug, Clone)]
pub struct CompletionInput<'a> {
    inst: &'a Instance,
    fixed_centers: Vec<usize>,
    fixed_radii: Vec<f64>,
    k: usize,
    // per-point discount: radius of the fixed center at that point, else 0
    discount: Vec<f64>,
}

impl<'a> CompletionInput<'a> {
    /// # Panics
    /// If the center and radius lists differ in length, more than `k` centers
    /// are fixed, `k > n`, or a radius is negative.
    pub fn new(inst: &'a Instance, fixed_centers: Vec<usize>, fixed_radii: Vec<f64>, k: usize) -> Self {
        assert_eq!(fixed_centers.len(), fixed_radii.len(), "one radius per fixed center");
        assert!(fixed_centers.len() <= k, "more fixed centers than k");
        assert!(k <= inst.n(), "k = {k} exceeds n = {}", inst.n());
        let mut discount = vec![0.0; inst.n()];
        for (&c, &r) in fixed_centers.iter().zip(&fixed_radii) {
            assert!(r >= 0.0, "negative radius {r}");
            // A point fixed twice keeps its larger ball.
            discount[c] = f64::max(discount[c], r);
        }
        CompletionInput {
            inst,
            fixed_centers,
            fixed_radii,
            k,
            discount,
        }
    }

    /// Plain k-center: nothing fixed.
    pub fn unconstrained(inst: &'a Instance, k: usize) -> Self {
        Self::new(inst, Vec::new(), Vec::new(), k)
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn fixed_centers(&self) -> &[usize] {
        &self.fixed_centers
    }

    pub fn fixed_radii(&self) -> &[f64] {
        &self.fixed_radii
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `d'(x, y)`.
    #[inline]
    pub fn adjusted_distance(&self, x: usize, y: usize) -> f64 {
        let d = self.inst.dist(x, y);
        let cut = self.discount[x] + self.discount[y];
        if cut > 0.0 {
            (d - cut).max(0.0)
        } else {
            d
        }
    }
}

/// `d'(x, y)` for the given completion input.
pub fn adjusted_distance(input: &CompletionInput<'_>, x: usize, y: usize) -> f64 {
    input.adjusted_distance(x, y)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletionOutput {
    /// `k` point indices; the first `ℓ` are the fixed centers, in order.
    pub centers: Vec<usize>,
    /// For each point, the slot in `centers` of its `d'`-nearest center.
    pub alpha: Vec<usize>,
    /// `max_p d'(p, centers[alpha[p]])`.
    pub value: f64,
}

impl CompletionOutput {
    /// Center point serving `p`.
    pub fn center_of(&self, p: usize) -> usize {
        self.centers[self.alpha[p]]
    }
}

/// Farthest-first traversal under `d'`, started from the fixed centers (or
/// from point 0 when none are fixed). Ties go to the smallest point index and
/// the smallest center slot.
pub fn fft_completion(input: &CompletionInput<'_>) -> CompletionOutput {
    let n = input.inst.n();
    let k = input.k;
    let mut centers = input.fixed_centers.clone();
    if centers.is_empty() {
        centers.push(0);
    }

    let mut nearest = vec![f64::INFINITY; n];
    let mut alpha = vec![0usize; n];
    let relax = |slot: usize, c: usize, nearest: &mut [f64], alpha: &mut [usize]| {
        for p in 0..n {
            let d = input.adjusted_distance(p, c);
            if d < nearest[p] {
                nearest[p] = d;
                alpha[p] = slot;
            }
        }
    };
    for (slot, &c) in centers.iter().enumerate() {
        relax(slot, c, &mut nearest, &mut alpha);
    }
    while centers.len() < k {
        let mut far = 0;
        for p in 1..n {
            if nearest[p] > nearest[far] {
                far = p;
            }
        }
        centers.push(far);
        relax(centers.len() - 1, far, &mut nearest, &mut alpha);
    }
    let value = nearest.iter().copied().fold(0.0, f64::max);
    CompletionOutput { centers, alpha, value }
}
