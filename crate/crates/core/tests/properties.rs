use proptest::prelude::*;
use weil::field::PrimeField;
use weil::heisenberg::{comm_exponent, pi_map, ExtraspecialElement};
use weil::linops::Operator;
use weil::symplectic::{
    decompose, decompose_randomized, evaluate_word, gen_images, random_element, random_word, weil_image,
    word_length_bound, SpMatrix,
};
use weil::weilgen::{WeilGeneratorSet, WeilParams};

fn gens(r: u64, p: u64, ell: usize) -> WeilGeneratorSet<PrimeField> {
    let f = PrimeField::new(r, p).unwrap();
    WeilGeneratorSet::new(&WeilParams::new(f, ell).unwrap())
}

fn cases() -> impl Strategy<Value = (u64, u64, usize)> {
    prop_oneof![Just((3u64, 7u64, 1usize)), Just((3, 7, 2)), Just((5, 11, 1)), Just((5, 11, 2)), Just((7, 29, 1))]
}

fn element(r: u64, ell: usize) -> impl Strategy<Value = ExtraspecialElement> {
    (0..r, prop::collection::vec(0..r, ell), prop::collection::vec(0..r, ell))
        .prop_map(move |(c, a, b)| ExtraspecialElement::new(r, c, a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_round_trips((r, _, ell) in cases(), seed in any::<u64>()) {
        let g = random_element(ell, r, seed);
        let word = decompose(&g).unwrap();
        prop_assert!(word.len() <= word_length_bound(ell));
        prop_assert_eq!(evaluate_word(&gen_images(ell, r), &word).unwrap(), g);
    }

    #[test]
    fn image_independent_of_word((r, p, ell) in cases(), seed in any::<u64>(), alt in any::<u64>()) {
        let gens = gens(r, p, ell);
        let f = gens.field().clone();
        let g = random_element(ell, r, seed);
        let a = evaluate_word(&gens, &decompose(&g).unwrap()).unwrap();
        let b = evaluate_word(&gens, &decompose_randomized(&g, alt).unwrap()).unwrap();
        prop_assert!(a.equals(&f, &b));
    }

    #[test]
    fn pi_inverts_image((r, p, ell) in cases(), seed in any::<u64>()) {
        let gens = gens(r, p, ell);
        let g = random_element(ell, r, seed);
        let image = weil_image(&g, &gens).unwrap();
        prop_assert_eq!(pi_map(&Operator::Dense(image), &gens.params).unwrap(), g);
    }

    #[test]
    fn image_is_multiplicative((r, p, ell) in cases(), s in any::<u64>(), t in any::<u64>()) {
        let gens = gens(r, p, ell);
        let f = gens.field().clone();
        let (g, h) = (random_element(ell, r, s), random_element(ell, r, t));
        let gh = weil_image(&g.mul(&h), &gens).unwrap();
        let prod = weil_image(&g, &gens).unwrap().matmul(&f, &weil_image(&h, &gens).unwrap()).unwrap();
        prop_assert_eq!(gh, prod);
    }

    #[test]
    fn word_inverse_evaluates_to_inverse((r, p, ell) in cases(), seed in any::<u64>(), len in 0usize..30) {
        let gens = gens(r, p, ell);
        let f = gens.field().clone();
        let w = random_word(ell, r, seed, len);
        let both = w.concat(&w.inverse(r));
        prop_assert!(evaluate_word(&gens, &both).unwrap().equals(&f, &Operator::identity(&f, gens.dim())));
        prop_assert!(both.normalized(r).is_empty());
    }

    #[test]
    fn sp_inverse((r, _, ell) in cases(), seed in any::<u64>()) {
        let g = random_element(ell, r, seed);
        prop_assert!(g.is_symplectic());
        prop_assert!(g.mul(&g.inverse().unwrap()).is_identity());
        prop_assert_eq!(g.pow(0), SpMatrix::identity(r, ell));
    }

    #[test]
    fn extraspecial_group_laws(x in element(5, 2), y in element(5, 2), z in element(5, 2)) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert!(x.mul(&x.inv()).is_central() && x.mul(&x.inv()).c == 0);
        let commutator = x.mul(&y).mul(&x.inv()).mul(&y.inv());
        prop_assert!(commutator.is_central());
        prop_assert_eq!(commutator.c, comm_exponent(&x, &y));
    }

    #[test]
    fn extraspecial_operator_is_homomorphism(x in element(3, 2), y in element(3, 2)) {
        let f = PrimeField::new(3, 7).unwrap();
        let space = weil::linops::IndexSpace::new(3, 2);
        let lhs = x.mul(&y).to_operator(&f, space);
        let rhs = Operator::product(9, [x.to_operator(&f, space), y.to_operator(&f, space)]);
        prop_assert!(lhs.equals(&f, &rhs));
    }
}
