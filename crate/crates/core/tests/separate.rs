use coordsim::prob::{binary_entropy, total_variation, Alphabet, SymbolSequence};
use coordsim::regions::example_separate_design;
use coordsim::rng::{sample_index, seeded, stream};
use coordsim::separate::*;
use coordsim::{AdditiveChannel, Error, RateSpec};
use proptest::prelude::*;

fn system(p2: f64, rates: RateSpec, channel: AdditiveChannel<f64>, seed: u64) -> SeparateSystem<f64> {
    let p_xyu = example_separate_design::<f64>(0.1, p2).unwrap();
    SeparateSystem::new(&p_xyu, rates, channel, 1.0, seed).unwrap()
}

#[test]
fn zero_noise_roundtrip_is_exact() {
    let sys = system(
        0.375,
        RateSpec::from_bits(8, 3, 1, 0).unwrap(),
        AdditiveChannel::noiseless(2).unwrap(),
        4,
    );
    let mut rng = seeded(1);
    for t in 0..200 {
        let x = SymbolSequence::unrank(Alphabet::BINARY, 8, (t * 37) % 256);
        let rec = separate_roundtrip(&sys, &x, t % 2, &mut rng).unwrap();
        assert_eq!(rec.i_hat, rec.i);
        assert_eq!(rec.z_hat, rec.z_true);
        assert!(rec.z_true.symbols().iter().all(|&z| z == 0));
        assert_eq!(rec.u_hat, sys.coordination().codebook().c_sequence(rec.i, t % 2));
    }
}

#[test]
fn correct_decoding_recovers_the_noise() {
    let sys = system(
        0.375,
        RateSpec::from_bits(12, 3, 0, 0).unwrap(),
        AdditiveChannel::binary(0.15).unwrap(),
        2,
    );
    let mut rng = seeded(3);
    let px = [0.5, 0.5];
    let (mut correct, mut wrong) = (0, 0);
    for _ in 0..2000 {
        let x: Vec<u32> = (0..12).map(|_| sample_index(&px, &mut rng) as u32).collect();
        let rec = separate_roundtrip(&sys, &SymbolSequence::binary(&x).unwrap(), 0, &mut rng).unwrap();
        if rec.i_hat == rec.i {
            assert_eq!(rec.z_hat, rec.z_true);
            correct += 1;
        } else {
            wrong += 1;
        }
    }
    assert!(correct > 0 && wrong > 0);
}

#[test]
fn bsc005_decode_error_is_small() {
    let rates = RateSpec::from_bits(24, 4, 0, 0).unwrap();
    let mut total = 0.0;
    for seed in 0..20u64 {
        let sys = system(0.375, rates, AdditiveChannel::binary(0.05).unwrap(), seed);
        let counts = separate_simulate(&sys, 10_000, &mut stream(seed, 5)).unwrap();
        assert_eq!(counts.actions.trials, 10_000);
        total += counts.actions.decode_error_rate();
    }
    assert!(total / 20.0 < 0.1, "mean error {}", total / 20.0);
}

#[test]
fn perfect_channel_reproduces_the_noiseless_scheme() {
    let sys = system(
        0.1,
        RateSpec::from_bits(4, 2, 1, 0).unwrap(),
        AdditiveChannel::noiseless(2).unwrap(),
        9,
    );
    let counts = separate_simulate(&sys, 100_000, &mut seeded(12)).unwrap();
    assert_eq!(counts.noise_mismatches, 0);
    let exact = sys.noiseless_pmf().unwrap();
    let tv = total_variation(&counts.actions.empirical::<f64>().unwrap(), &exact).unwrap();
    assert!(tv < 0.02, "tv {tv}");
}

#[test]
fn construction_is_validated() {
    let p_xyu = example_separate_design::<f64>(0.1, 0.375).unwrap();
    let ch = AdditiveChannel::<f64>::binary(0.1).unwrap();
    let with_ra = RateSpec::from_bits(4, 2, 0, 1).unwrap();
    assert!(matches!(
        SeparateSystem::new(&p_xyu, with_ra, ch.clone(), 1.0, 0),
        Err(Error::Specification(_))
    ));
    let rates = RateSpec::from_bits(4, 2, 0, 0).unwrap();
    assert!(matches!(
        SeparateSystem::new(&p_xyu, rates, ch.clone(), 0.3, 0),
        Err(Error::Specification(_))
    ));
    let sys = SeparateSystem::new(&p_xyu, rates, ch.clone(), 1.5, 0).unwrap();
    assert_eq!(sys.m(), 6);
    assert_eq!(sys.channel_code().len(), 4);
    let rates =
        coordsim::JointPmf::<f64>::from_dims(&[2, 2, 2], vec![0.25, 0.25, 0.0, 0.0, 0.0, 0.0, 0.25, 0.25]).unwrap();
    assert!(matches!(
        SeparateSystem::new(&rates, RateSpec::from_bits(4, 2, 0, 0).unwrap(), ch, 1.0, 0),
        Err(Error::Factorization(_))
    ));
}

#[test]
fn ml_decoder_prefers_the_closest_word() {
    let code = ChannelCode::generate(2, 8, 16, 3).unwrap();
    let cost = [-(0.9f64.log2()), -(0.1f64.log2())];
    for i in 0..8 {
        assert_eq!(code.ml_decode(code.word(i), &cost), i);
    }
}

#[test]
fn lemma4_noiseless_channel() {
    let r = lemma4_verify_channel(
        &AdditiveChannel::<f64>::noiseless(2).unwrap(),
        16,
        0.25,
        500,
        &[0, 1, 2],
    )
    .unwrap();
    assert_eq!(r.p_z_mismatch, 0.0);
    assert_eq!(r.entropy_rate_est, 0.0);
    assert_eq!(r.mi_leak_est, Some(0.0));
}

#[test]
fn lemma4_from_a_system_and_report_json() {
    let sys = system(
        0.375,
        RateSpec::from_bits(16, 4, 0, 0).unwrap(),
        AdditiveChannel::binary(0.1).unwrap(),
        0,
    );
    let r = lemma4_verify(&sys, 1000, &[0, 1]).unwrap();
    assert_eq!(r.m, 16);
    assert!((r.rate - 0.25).abs() < 1e-12);
    assert_eq!(r.p_z_mismatch_per_seed.len(), 2);
    let json = serde_json::to_string(&r).unwrap();
    let back: Lemma4Report = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
}

#[test]
fn lemma4_mismatch_shrinks_with_m() {
    let ch = AdditiveChannel::<f64>::binary(0.1).unwrap();
    let seeds: Vec<u64> = (0..20).collect();
    let mut last = f64::INFINITY;
    for m in [16usize, 24, 32] {
        let r = lemma4_verify_channel(&ch, m, 0.25, 2000, &seeds).unwrap();
        assert!(r.p_z_mismatch <= last, "m {m}: {} after {last}", r.p_z_mismatch);
        last = r.p_z_mismatch;
        if m == 32 {
            assert!((r.entropy_rate_est - binary_entropy(0.1).unwrap()).abs() < 0.05);
        }
    }
}

#[test]
fn lemma4_ternary_field_has_no_leak_estimate() {
    let noise = coordsim::Pmf::<f64>::from_f64(&[0.8, 0.1, 0.1]).unwrap();
    let ch = AdditiveChannel::new(3, noise).unwrap();
    let r = lemma4_verify_channel(&ch, 8, 0.25, 300, &[5]).unwrap();
    assert!(r.mi_leak_est.is_none());
    assert!(r.entropy_rate_est > 0.0);
}

#[test]
fn extract_examples() {
    let zeros = SymbolSequence::zeros(Alphabet::BINARY, 40);
    assert!(extract(&zeros, &ExtractorSpec::new(10, 2))
        .unwrap()
        .iter()
        .all(|&b| b == 0));
    assert!(extract(&zeros, &ExtractorSpec::new(0, 2)).unwrap().is_empty());
    let ternary = SymbolSequence::zeros(Alphabet::new(3).unwrap(), 8);
    assert!(matches!(
        extract(&ternary, &ExtractorSpec::new(2, 0)),
        Err(Error::Unsupported(_))
    ));
    assert_eq!(ExtractorSpec::for_entropy_rate(64, 0.469, 0).unwrap().output_length, 30);
}

#[test]
fn extractor_output_is_nearly_unbiased() {
    let spec = ExtractorSpec::new(16, 77);
    let mut rng = seeded(21);
    let mut ones = [0u32; 16];
    let noise = [0.9, 0.1];
    for _ in 0..10_000 {
        let z: Vec<u32> = (0..64).map(|_| sample_index(&noise, &mut rng) as u32).collect();
        let out = extract(&SymbolSequence::binary(&z).unwrap(), &spec).unwrap();
        for (c, &b) in ones.iter_mut().zip(&out) {
            *c += b as u32;
        }
    }
    for c in ones {
        assert!((c as f64 / 1e4 - 0.5).abs() < 0.05);
    }
}

proptest! {
    #[test]
    fn extract_is_linear(a in prop::collection::vec(0u32..2, 48), b in prop::collection::vec(0u32..2, 48), seed in any::<u64>(), len in 0usize..=48) {
        let spec = ExtractorSpec::new(len, seed);
        let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let ea = extract(&SymbolSequence::binary(&a).unwrap(), &spec).unwrap();
        let eb = extract(&SymbolSequence::binary(&b).unwrap(), &spec).unwrap();
        let es = extract(&SymbolSequence::binary(&sum).unwrap(), &spec).unwrap();
        let xor: Vec<u8> = ea.iter().zip(&eb).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(es, xor);
    }
}
