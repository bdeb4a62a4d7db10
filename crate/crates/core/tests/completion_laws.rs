//! Level-wise laws of completions, checked against plain integer arithmetic.

use std::rc::Rc;

use proptest::prelude::*;
use ua_core::algebra::Term;
use ua_core::prochain::{CauchySequence, Completion, Integers, ModulusChain, TableChain};

fn chains() -> Vec<Rc<ModulusChain>> {
    vec![
        Rc::new(ModulusChain::powers(2).unwrap()),
        Rc::new(ModulusChain::powers(3).unwrap()),
        Rc::new(ModulusChain::powers(6).unwrap()),
        Rc::new(ModulusChain::new(vec![1, 2, 6, 12, 60, 360]).unwrap()),
        Rc::new(ModulusChain::constant(6).unwrap()),
    ]
}

fn term(vars: usize) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![(0..vars).prop_map(Term::Var), Just(Term::op("zero", vec![]))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::op("add", vec![a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::op("mul", vec![a, b])),
            inner.prop_map(|a| Term::op("neg", vec![a])),
        ]
    })
}

/// Integer evaluation, independent of the library's evaluators.
fn eval(t: &Term, env: &[i128]) -> i128 {
    match t {
        Term::Var(i) => env[*i],
        Term::Op(s, args) => {
            let v: Vec<i128> = args.iter().map(|a| eval(a, env)).collect();
            match s.as_str() {
                "add" => v[0] + v[1],
                "mul" => v[0] * v[1],
                "neg" => -v[0],
                "zero" => 0,
                _ => unreachable!(),
            }
        }
    }
}

proptest! {
    #[test]
    fn eta_is_a_homomorphism(a in -1_000_000i128..1_000_000, b in -1_000_000i128..1_000_000) {
        for chain in chains() {
            let c = Completion::new(chain.clone());
            let depth = chain.max_level_or(12);
            for op in [Integers::ADD, Integers::MUL] {
                prop_assert_eq!(c.eta_homomorphism_defect(op, &[a, b], depth).unwrap(), None);
            }
            prop_assert_eq!(c.eta_homomorphism_defect(Integers::NEG, &[a], depth).unwrap(), None);
        }
    }

    #[test]
    fn terms_agree_with_integer_evaluation(t in term(2), a in -1000i128..1000, b in -1000i128..1000) {
        for chain in chains() {
            let c = Completion::new(chain.clone());
            let x = c.apply_term(&t, &[c.eta(a), c.eta(b)]).unwrap();
            let value = eval(&t, &[a, b]);
            for k in 0..=8 {
                prop_assert_eq!(x.level(k).unwrap() as i128, value.rem_euclid(chain.modulus(k) as i128));
            }
        }
    }

    #[test]
    fn substitution_commutes_with_evaluation(
        t in term(2), s0 in term(2), s1 in term(2),
        digits in proptest::collection::vec(0u64..6, 16), a in -50i128..50,
    ) {
        let chain = Rc::new(ModulusChain::powers(6).unwrap());
        let c = Completion::new(chain.clone());
        let ch = chain.clone();
        let x = c.from_levels(move |k| Ok(ch.digits_to_level(k, |i| digits[i])));
        let args = [x, c.eta(a)];
        let composite = c.apply_term(&t.substitute(&[s0.clone(), s1.clone()]).unwrap(), &args).unwrap();
        let inner = [c.apply_term(&s0, &args).unwrap(), c.apply_term(&s1, &args).unwrap()];
        let nested = c.apply_term(&t, &inner).unwrap();
        prop_assert!(c.approx_eq(&composite, &nested, 8).unwrap());
    }

    #[test]
    fn distinct_integers_are_separated(a in -100_000i128..100_000, d in 1i128..4096) {
        let c = Completion::new(Rc::new(ModulusChain::powers(2).unwrap()));
        let level = c.separation_level(&c.eta(a), &c.eta(a + d), 12).unwrap();
        // The first level whose modulus does not divide the difference.
        let expected = (0..=12).find(|&k| d % (1i128 << k) != 0);
        prop_assert_eq!(level, expected);
        prop_assert!(level.is_some());
        prop_assert_eq!(c.separation_level(&c.eta(a), &c.eta(a), 12).unwrap(), None);
    }

    #[test]
    fn pro_cauchy_round_trips(digits in proptest::collection::vec(0u64..2, 16), window in 0usize..4) {
        let chain = Rc::new(ModulusChain::powers(2).unwrap());
        let c = Completion::new(chain.clone());
        let ch = chain.clone();
        let x = c.from_levels(move |k| Ok(ch.digits_to_level(k, |i| digits[i])));
        let seq = c.pro_to_cauchy(&x).unwrap();
        let back = c.cauchy_to_pro(&seq, window, 10).unwrap();
        prop_assert!(c.approx_eq(&back, &x, 10).unwrap());
        let again = c.pro_to_cauchy(&back).unwrap();
        prop_assert_eq!(c.sequences_separation(&seq, &again, window, 10).unwrap(), None);
    }

    #[test]
    fn certified_sequences_converge_to_their_limits(start in -1000i128..1000, step in 1i128..7) {
        // s_i = start + step·3^i: the tail from i = k is constant mod 3^k.
        let c = Completion::new(Rc::new(ModulusChain::powers(3).unwrap()));
        let seq = CauchySequence::new(move |i| Ok(start + step * 3i128.pow(i as u32)), |k| k);
        let x = c.cauchy_to_pro(&seq, 3, 10).unwrap();
        prop_assert!(c.approx_eq(&x, &c.eta(start), 10).unwrap());
        let section = c.pro_to_cauchy(&x).unwrap();
        prop_assert_eq!(c.sequences_separation(&seq, &section, 3, 10).unwrap(), None);
    }

    #[test]
    fn quotient_kernels_pull_back_to_the_coarse_chain(a in -10_000i128..10_000, b in -10_000i128..10_000) {
        let c = Completion::new(Rc::new(ModulusChain::powers(6).unwrap()));
        let coarse = Rc::new(ModulusChain::powers(2).unwrap());
        let q = c.quotient_uniformity(coarse.clone(), 8).unwrap();
        for k in 0..=8 {
            use ua_core::prochain::CongruenceChain;
            let related = q.nat(k, &c.eta(a)).unwrap() == q.nat(k, &c.eta(b)).unwrap();
            prop_assert_eq!(related, (a - b) % (1i128 << k) == 0);
        }
    }
}

#[test]
fn table_chains_complete_level_wise() {
    let levels: Vec<_> = [2, 4, 8].iter().map(|&n| Integers::residues(n).unwrap()).collect();
    let connect = vec![vec![0, 1, 0, 1], (0..8).map(|x| x % 4).collect()];
    let chain = Rc::new(TableChain::new(levels, connect).unwrap());
    let c = Completion::new(chain);
    for a in 0..8usize {
        for b in 0..8usize {
            for op in [Integers::ADD, Integers::MUL] {
                assert_eq!(c.eta_homomorphism_defect(op, &[a, b], 6).unwrap(), None);
            }
        }
        assert_eq!(c.eta(a).levels(4).unwrap(), [(a % 2) as u64, (a % 4) as u64, a as u64, a as u64, a as u64]);
    }
}

trait DepthCap {
    fn max_level_or(&self, depth: usize) -> usize;
}

impl DepthCap for ModulusChain {
    fn max_level_or(&self, depth: usize) -> usize {
        use ua_core::prochain::InverseSystem;
        self.max_level().map_or(depth, |m| m.min(depth))
    }
}
