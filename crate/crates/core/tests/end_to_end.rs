use schmidt::alice::{BaStrategy, BiLipschitzMap, CertifyingAlice, LacunarySpec, LacunaryStrategy, Targets};
use schmidt::bob::{GreedyBob, RandomBob};
use schmidt::certify::{verify, verify_ba, Verdict};
use schmidt::fractal::{DecayParams, FractalSupport};
use schmidt::game::{outcome_interval, run_game, Ball, BobStrategy, GameParams, Referee};
use schmidt::numerics::{int, ratio, CirclePoint};
use std::time::Instant;

fn cantor_params() -> (FractalSupport, GameParams, DecayParams) {
    let decay = DecayParams::cantor();
    let alpha = decay.max_alpha(16).unwrap();
    (FractalSupport::cantor(), GameParams::classical(alpha, ratio(1, 4)).unwrap(), decay)
}

fn greedy() -> GreedyBob {
    GreedyBob {
        opening: Ball::new(int(0), int(1)),
        extra_targets: vec![],
    }
}

#[test]
fn lacunary_against_greedy_bob() {
    let (k, p, decay) = cantor_params();
    let spec = LacunarySpec::geometric(int(2), Targets::Const(CirclePoint::zero())).unwrap();
    let mut alice = LacunaryStrategy::new(k.clone(), spec, BiLipschitzMap::identity(), p.clone(), decay).unwrap();
    let start = Instant::now();
    let t = run_game(&k, &p, &mut alice, &mut greedy(), 50).unwrap();
    Referee { support: &k, params: &p }.check_transcript(&t).unwrap();
    let certs = alice.certificates(&outcome_interval(&t), 50);
    assert_eq!(certs.len(), 1);
    for c in &certs {
        let r = verify(c).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{} {}", r.label, r.horizon);
    }
    eprintln!("lacunary: {:?}, {}", start.elapsed(), certs[0].to_json().len());
    assert!(!alice.completed().is_empty());
}

#[test]
fn ba_against_greedy_bob() {
    let (k, p, decay) = cantor_params();
    let mut alice = BaStrategy::new(k.clone(), BiLipschitzMap::identity(), p.clone(), decay).unwrap();
    let start = Instant::now();
    let t = run_game(&k, &p, &mut alice, &mut greedy(), 40).unwrap();
    let outcome = outcome_interval(&t);
    let sound = alice.sound_certificates(&outcome, 40);
    assert_eq!(verify_ba(&sound[0], None).unwrap(), Verdict::Pass);
    let claimed = alice.certificates(&outcome, 40);
    let v = verify_ba(&claimed[0], None).unwrap();
    eprintln!("ba: {:?} claimed constant verdict {:?}", start.elapsed(), v);
}

#[test]
fn both_strategies_against_random_bob() {
    let (k, p, decay) = cantor_params();
    for seed in 0..3 {
        let spec = LacunarySpec::geometric(int(3), Targets::Const(CirclePoint::new(ratio(1, 2)))).unwrap();
        let mut alice = LacunaryStrategy::new(k.clone(), spec, BiLipschitzMap::identity(), p.clone(), decay.clone()).unwrap();
        let mut bob: Box<dyn BobStrategy> = Box::new(RandomBob::new(Ball::new(int(0), int(1)), seed));
        let t = run_game(&k, &p, &mut alice, bob.as_mut(), 40).unwrap();
        for c in alice.certificates(&outcome_interval(&t), 40) {
            assert!(verify(&c).unwrap().verdict.passed());
        }
        let mut alice = BaStrategy::new(k.clone(), BiLipschitzMap::identity(), p.clone(), decay.clone()).unwrap();
        let mut bob: Box<dyn BobStrategy> = Box::new(RandomBob::new(Ball::new(int(0), int(1)), seed));
        let t = run_game(&k, &p, &mut alice, bob.as_mut(), 30).unwrap();
        for c in alice.sound_certificates(&outcome_interval(&t), 30) {
            assert!(verify(&c).unwrap().verdict.passed());
        }
    }
}

#[test]
fn thousand_short_games_stay_legal() {
    let (k, p, decay) = cantor_params();
    let start = Instant::now();
    for seed in 0..1000u64 {
        let mut bob = RandomBob::new(Ball::new(int(0), int(1)), seed);
        let t = if seed % 4 == 0 {
            let mut alice = BaStrategy::new(k.clone(), BiLipschitzMap::identity(), p.clone(), decay.clone()).unwrap();
            run_game(&k, &p, &mut alice, &mut bob, 6).unwrap()
        } else {
            let base = int(2 + (seed % 3) as i64);
            let spec = LacunarySpec::geometric(base, Targets::Const(CirclePoint::zero())).unwrap();
            let mut alice = LacunaryStrategy::new(k.clone(), spec, BiLipschitzMap::identity(), p.clone(), decay.clone()).unwrap();
            run_game(&k, &p, &mut alice, &mut bob, 10).unwrap()
        };
        Referee { support: &k, params: &p }.check_transcript(&t).unwrap();
    }
    eprintln!("1000 games: {:?}", start.elapsed());
}
