use num_bigint::BigUint;
use num_traits::{One, Pow};

/// Worst-case colour and width bounds for a left factor of maximum degree
/// `delta` and a right factor of tree-width `k`; the refined pair applies
/// when the square of the left factor is `d`-colourable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub delta: usize,
    pub k: usize,
    pub d: Option<usize>,
    /// `(Δ² + 2) · Δ^(2(Δ+1)(k+1))`
    pub colours: BigUint,
    /// `(k + 1)(Δ² + 1) · Δ^(2(Δ+1)(k+1))`
    pub width: BigUint,
    /// `(d + 1) · min((d-1)^(Δ+1), 2^d)^(k+1)`
    pub refined_colours: Option<BigUint>,
    /// `(k + 1) · d · min((d-1)^(Δ+1), 2^d)^(k+1)`
    pub refined_width: Option<BigUint>,
}

impl BoundReport {
    /// The tighter of the general and refined colour bounds.
    pub fn best_colours(&self) -> &BigUint {
        match &self.refined_colours {
            Some(r) if r < &self.colours => r,
            _ => &self.colours,
        }
    }

    pub fn best_width(&self) -> &BigUint {
        match &self.refined_width {
            Some(r) if r < &self.width => r,
            _ => &self.width,
        }
    }
}

fn big(x: usize) -> BigUint {
    BigUint::from(x)
}

pub fn bound_report(delta: usize, k: usize, d: Option<usize>) -> BoundReport {
    let base_count: BigUint = Pow::pow(big(delta), 2 * (delta + 1) * (k + 1));
    let colours = big(delta * delta + 2) * &base_count;
    let width = big(k + 1) * big(delta * delta + 1) * &base_count;
    let per_slot = d.map(|d| {
        let a: BigUint = Pow::pow(big(d.saturating_sub(1)), delta + 1);
        let b: BigUint = BigUint::one() << d;
        let m = a.min(b);
        Pow::pow(m, k + 1)
    });
    let refined_colours = d.zip(per_slot.clone()).map(|(d, c)| big(d + 1) * c);
    let refined_width = d.zip(per_slot).map(|(d, c)| big(k + 1) * big(d) * c);
    BoundReport {
        delta,
        k,
        d,
        colours,
        width,
        refined_colours,
        refined_width,
    }
}
