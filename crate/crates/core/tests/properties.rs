mod common;

use proptest::prelude::*;

use common::*;
use subriemann::brackets::{bracket_of, lie_bracket, Frame, MultiIndex, VecField};
use subriemann::exactalg::rat::rat;
use subriemann::exactalg::{Poly, PolyMatrix, Rat};
use subriemann::flags::{codim_sum, weighted_sum, Structure};
use subriemann::interface::{parse_poly, ParseContext};
use subriemann::orders::{nonholonomic_order, Order};

fn jacobi_sum(x: &VecField, y: &VecField, z: &VecField) -> VecField {
    let a = lie_bracket(x, &lie_bracket(y, z).unwrap()).unwrap();
    let b = lie_bracket(y, &lie_bracket(z, x).unwrap()).unwrap();
    let c = lie_bracket(z, &lie_bracket(x, y).unwrap()).unwrap();
    a.add(&b).add(&c)
}

fn three_polys() -> impl Strategy<Value = (Poly, Poly, Poly)> {
    (1usize..=3).prop_flat_map(|n| (poly(n, 3), poly(n, 3), poly(n, 3)))
}

/// Random integer points in `[-2, 2]^n`.
fn small_point(n: usize) -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec((-2i64..=2).prop_map(|a| rat(a, 1)), n)
}

fn recombined(frame: &Frame, a: &[Vec<i64>]) -> Frame {
    let fields = a
        .iter()
        .map(|row| {
            row.iter()
                .zip(frame.fields())
                .fold(VecField::zero(frame.dim()), |acc, (&c, f)| acc.add(&f.scale(&rat(c, 1))))
        })
        .collect();
    Frame::new(fields).unwrap()
}

fn le_capped(a: Order, b: Order) -> bool {
    // `a ≤ b` where `AboveCap(c)` means "at least c".
    match (a, b) {
        (_, Order::AboveCap(_)) => true,
        (Order::Finite(x), Order::Finite(y)) => x <= y,
        (Order::AboveCap(_), Order::Finite(_)) => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms((a, b, c) in three_polys()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(a.nvars()), a.clone());
    }

    #[test]
    fn leibniz((f, g, _) in three_polys(), axis in 0usize..3) {
        let axis = axis % f.nvars();
        let lhs = (&f * &g).partial(axis);
        let rhs = &(&f.partial(axis) * &g) + &(&f * &g.partial(axis));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn field_leibniz((x, _, _) in field_triple(), seed in 0u64..1000) {
        let n = x.dim();
        let f = &Poly::var(0, n) * &Poly::var(n - 1, n);
        let g = &Poly::var((seed as usize) % n, n) + &Poly::constant(rat(seed as i64 % 5, 1), n);
        prop_assert_eq!(x.apply(&(&f * &g)), &(&x.apply(&f) * &g) + &(&f * &x.apply(&g)));
    }

    #[test]
    fn det_invariant_under_transpose(entries in proptest::collection::vec(poly(2, 2), 9)) {
        let rows: Vec<Vec<Poly>> = entries.chunks(3).map(<[Poly]>::to_vec).collect();
        let m = PolyMatrix::from_rows(rows);
        prop_assert_eq!(m.det().unwrap(), m.transpose().det().unwrap());
    }

    #[test]
    fn jacobi_and_antisymmetry((x, y, z) in field_triple()) {
        prop_assert!(jacobi_sum(&x, &y, &z).is_zero());
        let xy = lie_bracket(&x, &y).unwrap();
        let yx = lie_bracket(&y, &x).unwrap();
        prop_assert!(xy.add(&yx).is_zero());
    }

    #[test]
    fn order_is_a_valuation(f in poly(3, 2), g in poly(3, 2), at_origin in any::<bool>()) {
        let m = fixture("martinet");
        let p = if at_origin { ints(&[0, 0, 0]) } else { ints(&[1, 0, 0]) };
        let cap = 8;
        let of = nonholonomic_order(&f, &m.frame, &p, cap).unwrap();
        let og = nonholonomic_order(&g, &m.frame, &p, cap).unwrap();
        let ofg = nonholonomic_order(&(&f * &g), &m.frame, &p, cap).unwrap();
        let osum = nonholonomic_order(&(&f + &g), &m.frame, &p, cap).unwrap();
        if let (Order::Finite(a), Order::Finite(b)) = (of, og) {
            if a + b < cap {
                prop_assert_eq!(ofg, Order::Finite(a + b));
            }
        }
        prop_assert!(le_capped(of.min(og), osum));
    }

    #[test]
    fn bracket_fields_lower_order_by_at_most_length(
        f in poly(3, 3),
        word in proptest::collection::vec(1usize..=2, 1..=3),
        at_origin in any::<bool>(),
    ) {
        let m = fixture("martinet");
        let p = if at_origin { ints(&[0, 0, 0]) } else { ints(&[1, 0, 0]) };
        let cap = 10;
        let idx = MultiIndex::new(word).unwrap();
        let y = bracket_of(&idx, &m.frame).unwrap();
        let of = nonholonomic_order(&f, &m.frame, &p, cap).unwrap();
        let oy = nonholonomic_order(&y.apply(&f), &m.frame, &p, cap).unwrap();
        if let Order::Finite(a) = of {
            let floor = a.saturating_sub(idx.len());
            prop_assert!(le_capped(Order::Finite(floor), oy), "ord f = {a}, ord X_I f = {oy}");
        }
    }

    #[test]
    fn growth_is_invariant_under_recombination(
        pick in 0usize..2,
        a in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 3), 3),
        raw in small_point(4),
    ) {
        let m = if pick == 0 { fixture("martinet") } else { fixture("example2") };
        let r = m.rank();
        let a: Vec<Vec<i64>> = a.iter().take(r).map(|row| row[..r].to_vec()).collect();
        let det = subriemann::exactalg::RatMatrix::from_columns(
            r,
            &(0..r).map(|j| (0..r).map(|i| rat(a[i][j], 1)).collect()).collect::<Vec<_>>(),
        )
        .det();
        prop_assume!(det != rat(0, 1));
        let p: Vec<Rat> = raw[..m.dimension].to_vec();
        let mut s1 = Structure::new(&m.frame, 10);
        let mut s2 = Structure::new(&recombined(&m.frame, &a), 10);
        prop_assert_eq!(s1.growth(&p).unwrap().dims, s2.growth(&p).unwrap().dims);
    }

    #[test]
    fn weighted_and_codim_sums_agree(raw in small_point(5), pick in 0usize..4) {
        let (name, k) = [("martinet", None), ("example2", None), ("example3", Some(3)), ("example4", Some(3))][pick];
        let m = fixture_k(name, k);
        let p: Vec<Rat> = raw[..m.dimension].to_vec();
        let g = Structure::new(&m.frame, 10).growth(&p).unwrap();
        prop_assert_eq!(weighted_sum(&g.dims), g.q);
        prop_assert_eq!(codim_sum(&g.dims), g.q);
    }

    #[test]
    fn printing_round_trips(text in expression()) {
        let ctx = ParseContext::coordinates(3);
        let names = Poly::default_names(3, 0);
        let p = parse_poly(&text, &ctx).unwrap();
        let printed = p.to_string_with(&names);
        let q = parse_poly(&printed, &ctx).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(q.to_string_with(&names), printed);
    }

    #[test]
    fn parser_never_panics(text in "[x1-3+*/^() 0-9.k-]{0,16}") {
        let ctx = ParseContext::coordinates(3);
        if let Err(e) = parse_poly(&text, &ctx) {
            prop_assert!(e.offset <= text.len());
        }
    }
}
