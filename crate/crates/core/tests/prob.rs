use approx::assert_abs_diff_eq;
use coordsim::prob::*;
use coordsim::Error;
use proptest::prelude::*;

fn pmf(p: &[f64]) -> Pmf<f64> {
    Pmf::from_f64(p).unwrap()
}

#[test]
fn binary_entropy_examples() {
    assert_eq!(binary_entropy(0.5f64).unwrap(), 1.0);
    assert_eq!(binary_entropy(0.0f64).unwrap(), 0.0);
    assert_eq!(binary_entropy(1.0f64).unwrap(), 0.0);
    assert_abs_diff_eq!(binary_entropy(0.11f64).unwrap(), 0.4999, epsilon = 1e-3);
    assert!(matches!(binary_entropy(1.2f64), Err(Error::Domain(_))));
    assert!(binary_entropy(-0.1f64).is_err());
}

#[test]
fn inverse_binary_entropy_examples() {
    assert_abs_diff_eq!(inverse_binary_entropy(1.0f64).unwrap(), 0.5, epsilon = 1e-9);
    assert_eq!(inverse_binary_entropy(0.0f64).unwrap(), 0.0);
    assert_abs_diff_eq!(inverse_binary_entropy(0.9709505945f64).unwrap(), 0.4, epsilon = 1e-9);
    assert!(inverse_binary_entropy(1.5f64).is_err());
}

#[test]
fn entropy_examples() {
    assert_abs_diff_eq!(
        entropy(&Pmf::<f64>::uniform(Alphabet::new(4).unwrap())),
        2.0,
        epsilon = 1e-12
    );
    assert_eq!(
        entropy(&Pmf::<f64>::point_mass(Alphabet::new(3).unwrap(), 1).unwrap()),
        0.0
    );
    assert_abs_diff_eq!(entropy(&pmf(&[0.9, 0.1])), 0.4689955936, epsilon = 1e-9);
}

#[test]
fn kl_examples() {
    let p = pmf(&[0.3, 0.7]);
    assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
    assert_abs_diff_eq!(
        kl_divergence(&pmf(&[1.0, 0.0]), &pmf(&[0.5, 0.5])).unwrap(),
        1.0,
        epsilon = 1e-12
    );
    assert!(kl_divergence(&pmf(&[0.5, 0.5]), &pmf(&[1.0, 0.0]))
        .unwrap()
        .is_infinite());
    assert!(kl_divergence(&pmf(&[0.5, 0.5]), &pmf(&[0.2, 0.3, 0.5])).is_err());
}

#[test]
fn tv_examples() {
    let p = pmf(&[0.2, 0.8]);
    assert_eq!(total_variation(&p, &p).unwrap(), 0.0);
    assert_abs_diff_eq!(
        total_variation(&pmf(&[1.0, 0.0]), &pmf(&[0.5, 0.5])).unwrap(),
        0.5,
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(total_variation(&p, &pmf(&[0.5, 0.5])).unwrap(), 0.3, epsilon = 1e-12);
    assert!(total_variation(&p, &pmf(&[0.2, 0.3, 0.5])).is_err());
}

#[test]
fn mutual_information_examples() {
    let b = pmf(&[0.5, 0.5]);
    let indep = product_pmf(b.clone(), 2).unwrap();
    assert_abs_diff_eq!(mutual_information(&indep, &[0], &[1]).unwrap(), 0.0, epsilon = 1e-12);
    let corr = JointPmf::from_dims(&[2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
    assert_abs_diff_eq!(mutual_information(&corr, &[0], &[1]).unwrap(), 1.0, epsilon = 1e-12);
    let bsc = JointPmf::from_dims(&[2, 2], vec![0.445, 0.055, 0.055, 0.445]).unwrap();
    assert_abs_diff_eq!(mutual_information(&bsc, &[0], &[1]).unwrap(), 0.5002, epsilon = 1e-3);
    assert!(matches!(
        mutual_information(&corr, &[0], &[0]),
        Err(Error::InvalidAxis(_))
    ));
    assert!(mutual_information(&corr, &[0], &[]).is_err());
}

#[test]
fn product_pmf_examples() {
    let u = product_pmf(pmf(&[0.5, 0.5]), 2).unwrap();
    assert!(u.probs().iter().all(|&v| (v - 0.25).abs() < 1e-15));
    let pm = product_pmf(Pmf::<f64>::point_mass(Alphabet::new(3).unwrap(), 2).unwrap(), 3).unwrap();
    assert_eq!(pm.prob(&[2, 2, 2]).unwrap(), 1.0);
    let b = product_pmf(pmf(&[0.7, 0.3]), 2).unwrap();
    for (got, want) in b.probs().iter().zip([0.49, 0.21, 0.21, 0.09]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
    }
}

#[test]
fn product_pmf_cap_is_a_resource_error() {
    let err = product_pmf_capped(pmf(&[0.5, 0.5]), 10, 512).unwrap_err();
    assert!(err.is_resource());
    assert!(err.to_string().contains("1024"));
}

#[test]
fn counting_function_examples() {
    let s = SymbolSequence::binary(&[0, 1, 1, 0]).unwrap();
    assert_eq!(counting_function(1, &s).unwrap(), 2);
    let empty = SymbolSequence::new(Alphabet::BINARY, vec![]).unwrap();
    assert_eq!(counting_function(0, &empty).unwrap(), 0);
    let t = SymbolSequence::new(Alphabet::new(3).unwrap(), vec![2, 2, 2]).unwrap();
    assert_eq!(counting_function(2, &t).unwrap(), 3);
    assert!(counting_function(3, &t).is_err());
}

#[test]
fn strong_typicality_examples() {
    let zeros = SymbolSequence::zeros(Alphabet::BINARY, 7);
    let point: JointPmf<f64> = Pmf::point_mass(Alphabet::BINARY, 0).unwrap().into();
    assert!(is_strongly_typical(&[&zeros], &point, 0.01).unwrap());
    let one = SymbolSequence::binary(&[0, 1, 0]).unwrap();
    assert!(!is_strongly_typical(&[&one], &point, 10.0).unwrap());
    let half: JointPmf<f64> = pmf(&[0.5, 0.5]).into();
    let s = SymbolSequence::binary(&[0, 0, 1, 1]).unwrap();
    assert!(is_strongly_typical(&[&s], &half, 0.1).unwrap());
    let short = SymbolSequence::binary(&[0, 1]).unwrap();
    let pair = product_pmf(pmf(&[0.5, 0.5]), 2).unwrap();
    assert!(is_strongly_typical(&[&s, &short], &pair, 0.1).is_err());
}

fn arb_pmf(max_len: usize) -> impl Strategy<Value = Pmf<f64>> {
    prop::collection::vec(0.0f64..1.0, 2..=max_len).prop_filter_map("zero mass", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-6).then(|| Pmf::new(w.iter().map(|v| v / s).collect()).unwrap())
    })
}

fn arb_pair() -> impl Strategy<Value = (Pmf<f64>, Pmf<f64>)> {
    (2usize..6).prop_flat_map(|k| {
        let w = prop::collection::vec(0.01f64..1.0, k);
        (w.clone(), w).prop_map(|(a, b)| {
            let norm = |v: Vec<f64>| {
                let s: f64 = v.iter().sum();
                Pmf::new(v.iter().map(|x| x / s).collect()).unwrap()
            };
            (norm(a), norm(b))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn tv_symmetric_and_bounded((p, q) in arb_pair()) {
        let a = total_variation(&p, &q).unwrap();
        let b = total_variation(&q, &p).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn kl_zero_iff_tv_zero((p, q) in arb_pair(), same in any::<bool>()) {
        let q = if same { p.clone() } else { q };
        let kl = kl_divergence(&p, &q).unwrap();
        let tv = total_variation(&p, &q).unwrap();
        prop_assert_eq!(kl.abs() < 1e-12, tv < 1e-12);
    }
}

proptest! {
    #[test]
    fn product_of_marginals_has_zero_information(p in arb_pmf(4), q in arb_pmf(4)) {
        let joint = JointPmf::from(p).outer(&JointPmf::from(q)).unwrap();
        prop_assert!(mutual_information(&joint, &[0], &[1]).unwrap() < 1e-9);
    }

    #[test]
    fn product_entropy_is_additive(p in arb_pmf(3), n in 1usize..=8) {
        let h = entropy(&p);
        let prod = product_pmf(p, n).unwrap();
        prop_assert!((joint_entropy(&prod) - n as f64 * h).abs() < 1e-9);
    }

    #[test]
    fn binary_entropy_inverts(h in 0.0f64..=1.0) {
        let q = inverse_binary_entropy(h).unwrap();
        prop_assert!((binary_entropy(q).unwrap() - h).abs() < 1e-9);
    }

    #[test]
    fn zero_slack_typicality_is_exact_type(bits in prop::collection::vec(0u32..3, 1..12), weights in prop::collection::vec(1u32..4, 3)) {
        let alphabet = Alphabet::new(3).unwrap();
        let total: u32 = weights.iter().sum();
        let probs: Vec<f64> = weights.iter().map(|&w| w as f64 / total as f64).collect();
        let joint: JointPmf<f64> = Pmf::new(probs.clone()).unwrap().into();
        let seq = SymbolSequence::new(alphabet, bits.clone()).unwrap();
        let n = bits.len() as f64;
        let exact = (0..3).all(|s| {
            let count = bits.iter().filter(|&&b| b == s).count() as f64;
            (count / n - probs[s as usize]).abs() < 1e-12
        });
        prop_assert_eq!(is_strongly_typical(&[&seq], &joint, 0.0).unwrap(), exact);
    }
}

#[test]
fn single_precision_scalar() {
    let p = Pmf::<f32>::from_f64(&[0.9, 0.1]).unwrap();
    assert!((entropy(&p) - 0.468_995_6f32).abs() < 1e-5);
}
