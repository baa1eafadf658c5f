//! Entropies, divergences and distances, all in bits.

use super::pmf::{JointPmf, Pmf, ProbTable};
use crate::error::{Error, Result};
use crate::scalar::{plogp, Real};

/// `h2(q) = -q log2 q - (1-q) log2 (1-q)`.
pub fn binary_entropy<R: Real>(q: R) -> Result<R> {
    if !(q >= R::zero() && q <= R::one()) {
        return Err(Error::Domain(format!("binary entropy argument {q} outside [0,1]")));
    }
    Ok(h2(q))
}

/// Unchecked binary entropy for arguments already known to lie in `[0, 1]`.
#[inline]
pub(crate) fn h2<R: Real>(q: R) -> R {
    plogp(q) + plogp(R::one() - q)
}

/// The unique `q` in `[0, 1/2]` with `h2(q) = h`, found by bisection.
pub fn inverse_binary_entropy<R: Real>(h: R) -> Result<R> {
    if !(h >= R::zero() && h <= R::one()) {
        return Err(Error::Domain(format!("entropy value {h} outside [0,1]")));
    }
    // Bisection runs in f64 for every scalar type.
    let target = h.as_f64();
    if target <= 0.0 {
        return Ok(R::zero());
    }
    if target >= 1.0 {
        // h2 is flat to machine precision near 1/2.
        return Ok(R::of(0.5));
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if h2(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(R::of(0.5 * (lo + hi)))
}

pub fn entropy<R: Real>(p: &Pmf<R>) -> R {
    entropy_of(p.probs())
}

pub(crate) fn entropy_of<R: Real>(probs: &[R]) -> R {
    probs.iter().map(|&q| plogp(q)).sum()
}

/// Entropy of a joint table, treating the product alphabet as one variable.
pub fn joint_entropy<R: Real>(p: &JointPmf<R>) -> R {
    entropy_of(p.probs())
}

fn same_shape<R: Real, T: ProbTable<R> + ?Sized>(p: &T, q: &T) -> Result<()> {
    let (dp, dq) = (p.dims(), q.dims());
    if dp != dq {
        return Err(Error::ShapeMismatch(format!("shapes {dp:?} and {dq:?} differ")));
    }
    Ok(())
}

/// `D(p || q)` in bits; `+inf` when `p` is not absolutely continuous w.r.t. `q`.
pub fn kl_divergence<R: Real, T: ProbTable<R> + ?Sized>(p: &T, q: &T) -> Result<R> {
    same_shape(p, q)?;
    let mut d = R::zero();
    for (&a, &b) in p.probs().iter().zip(q.probs()) {
        if a > R::zero() {
            if b <= R::zero() {
                return Ok(R::infinity());
            }
            d += a * (a / b).log2();
        }
    }
    Ok(d.max(R::zero()))
}

/// Half the L1 distance.
pub fn total_variation<R: Real, T: ProbTable<R> + ?Sized>(p: &T, q: &T) -> Result<R> {
    same_shape(p, q)?;
    Ok(tv_slices(p.probs(), q.probs()))
}

pub(crate) fn tv_slices<R: Real>(p: &[R], q: &[R]) -> R {
    let s: R = p.iter().zip(q).map(|(&a, &b)| (a - b).abs()).sum();
    (s / R::of(2.0)).min(R::one())
}

fn check_partition(num_axes: usize, groups: &[&[usize]]) -> Result<()> {
    let mut seen = vec![false; num_axes];
    for &g in groups {
        if g.is_empty() {
            return Err(Error::InvalidAxis("empty axis group".into()));
        }
        for &a in g {
            if a >= num_axes || seen[a] {
                return Err(Error::InvalidAxis(format!(
                    "axis {a} is out of range or repeated in the partition"
                )));
            }
            seen[a] = true;
        }
    }
    Ok(())
}

/// `I(G1; G2)` for a partition of the axes into two groups covering every axis exactly once.
pub fn mutual_information<R: Real>(joint: &JointPmf<R>, group1: &[usize], group2: &[usize]) -> Result<R> {
    check_partition(joint.num_axes(), &[group1, group2])?;
    if !seen_all(joint.num_axes(), &[group1, group2]) {
        return Err(Error::InvalidAxis(
            "partition must cover every axis exactly once".into(),
        ));
    }
    mi_unchecked(joint, group1, group2)
}

fn seen_all(num_axes: usize, groups: &[&[usize]]) -> bool {
    groups.iter().map(|g| g.len()).sum::<usize>() == num_axes
}

fn mi_unchecked<R: Real>(joint: &JointPmf<R>, g1: &[usize], g2: &[usize]) -> Result<R> {
    let h1 = joint_entropy(&joint.marginalize(g1)?);
    let h2_ = joint_entropy(&joint.marginalize(g2)?);
    let mut both: Vec<usize> = g1.iter().chain(g2).copied().collect();
    both.sort_unstable();
    let h12 = joint_entropy(&joint.marginalize(&both)?);
    Ok((h1 + h2_ - h12).max(R::zero()))
}

/// `I(G1; G2)` for disjoint axis groups; the remaining axes are summed out.
pub fn mutual_information_between<R: Real>(joint: &JointPmf<R>, group1: &[usize], group2: &[usize]) -> Result<R> {
    check_partition(joint.num_axes(), &[group1, group2])?;
    mi_unchecked(joint, group1, group2)
}

/// `H(T | G)` for disjoint axis groups; `given` may be empty.
pub fn conditional_entropy<R: Real>(joint: &JointPmf<R>, target: &[usize], given: &[usize]) -> Result<R> {
    if given.is_empty() {
        check_partition(joint.num_axes(), &[target])?;
        return Ok(joint_entropy(&joint.marginalize(target)?));
    }
    check_partition(joint.num_axes(), &[target, given])?;
    let mut both: Vec<usize> = target.iter().chain(given).copied().collect();
    both.sort_unstable();
    let h_both = joint_entropy(&joint.marginalize(&both)?);
    let h_given = joint_entropy(&joint.marginalize(given)?);
    Ok((h_both - h_given).max(R::zero()))
}

/// `I(G1; G2 | G3)` for disjoint axis groups.
pub fn conditional_mutual_information<R: Real>(
    joint: &JointPmf<R>,
    group1: &[usize],
    group2: &[usize],
    given: &[usize],
) -> Result<R> {
    if given.is_empty() {
        return mutual_information_between(joint, group1, group2);
    }
    check_partition(joint.num_axes(), &[group1, group2, given])?;
    let cat = |gs: &[&[usize]]| {
        let mut v: Vec<usize> = gs.iter().flat_map(|g| g.iter().copied()).collect();
        v.sort_unstable();
        v
    };
    let h = |axes: Vec<usize>| -> Result<R> { Ok(joint_entropy(&joint.marginalize(&axes)?)) };
    let value =
        h(cat(&[group1, given]))? + h(cat(&[group2, given]))? - h(cat(&[group1, group2, given]))? - h(cat(&[given]))?;
    Ok(value.max(R::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::pmf::product_pmf;
    use approx::assert_abs_diff_eq;

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5f64).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0f64).unwrap(), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.4f64).unwrap(), 0.9709505945, epsilon = 1e-10);
        assert!(binary_entropy(1.5f64).is_err());
        assert!(binary_entropy(-0.1f64).is_err());
    }

    #[test]
    fn inverse_binary_entropy_values() {
        assert_abs_diff_eq!(inverse_binary_entropy(1.0f64).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(inverse_binary_entropy(0.0f64).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(inverse_binary_entropy(0.9709505945f64).unwrap(), 0.4, epsilon = 1e-9);
        assert!(inverse_binary_entropy(1.2f64).is_err());
    }

    #[test]
    fn entropy_values() {
        let u = Pmf::<f64>::from_f64(&[0.25; 4]).unwrap();
        assert_abs_diff_eq!(entropy(&u), 2.0, epsilon = 1e-12);
        let pm = Pmf::<f64>::from_f64(&[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(entropy(&pm), 0.0);
        let b = Pmf::<f64>::from_f64(&[0.9, 0.1]).unwrap();
        assert_abs_diff_eq!(entropy(&b), 0.4689955936, epsilon = 1e-10);
    }

    #[test]
    fn kl_values() {
        let p = Pmf::<f64>::from_f64(&[0.3, 0.7]).unwrap();
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        let a = Pmf::<f64>::from_f64(&[1.0, 0.0]).unwrap();
        let h = Pmf::<f64>::from_f64(&[0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(kl_divergence(&a, &h).unwrap(), 1.0, epsilon = 1e-12);
        assert!(kl_divergence(&h, &a).unwrap().is_infinite());
        let three = Pmf::<f64>::from_f64(&[0.2, 0.3, 0.5]).unwrap();
        assert!(kl_divergence(&h, &three).is_err());
    }

    #[test]
    fn tv_values() {
        let a = Pmf::<f64>::from_f64(&[1.0, 0.0]).unwrap();
        let h = Pmf::<f64>::from_f64(&[0.5, 0.5]).unwrap();
        let c = Pmf::<f64>::from_f64(&[0.2, 0.8]).unwrap();
        assert_eq!(total_variation(&a, &a).unwrap(), 0.0);
        assert_abs_diff_eq!(total_variation(&a, &h).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(total_variation(&c, &h).unwrap(), 0.3, epsilon = 1e-12);
    }

    #[test]
    fn mutual_information_values() {
        let ind = product_pmf(Pmf::<f64>::bernoulli(0.5).unwrap(), 2).unwrap();
        assert_abs_diff_eq!(mutual_information(&ind, &[0], &[1]).unwrap(), 0.0, epsilon = 1e-12);
        let corr = JointPmf::<f64>::from_dims(&[2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(mutual_information(&corr, &[0], &[1]).unwrap(), 1.0, epsilon = 1e-12);
        let bsc = JointPmf::<f64>::from_dims(&[2, 2], vec![0.445, 0.055, 0.055, 0.445]).unwrap();
        assert_abs_diff_eq!(mutual_information(&bsc, &[0], &[1]).unwrap(), 0.5002, epsilon = 1e-3);
        assert!(mutual_information(&bsc, &[0], &[0]).is_err());
        assert!(mutual_information(&bsc, &[0], &[]).is_err());
    }

    #[test]
    fn conditional_quantities() {
        let bsc = JointPmf::<f64>::from_dims(&[2, 2], vec![0.45, 0.05, 0.05, 0.45]).unwrap();
        let h = conditional_entropy(&bsc, &[1], &[0]).unwrap();
        assert_abs_diff_eq!(h, h2(0.1f64), epsilon = 1e-12);
        // X -> Y -> Z chain: I(X;Z|Y) = 0.
        let chain = bsc.outer(&JointPmf::from_dims(&[2], vec![0.5, 0.5]).unwrap()).unwrap();
        let cmi = conditional_mutual_information(&chain, &[0], &[2], &[1]).unwrap();
        assert_abs_diff_eq!(cmi, 0.0, epsilon = 1e-12);
    }
}
