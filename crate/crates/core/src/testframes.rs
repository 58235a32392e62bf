//! Frames shared by unit tests.

use crate::brackets::{Frame, VecField};
use crate::exactalg::rat::{int, rat};
use crate::exactalg::{Poly, Rat};

fn unit(axis: usize, n: usize) -> Vec<Poly> {
    let mut c = vec![Poly::zero(n); n];
    c[axis] = Poly::one(n);
    c
}

fn x(i: usize, n: usize) -> Poly {
    Poly::var(i, n)
}

pub fn martinet() -> Frame {
    let n = 3;
    let mut x2 = unit(1, n);
    x2[2] = x(0, n).pow(2).scale(&rat(1, 2));
    Frame::new(vec![VecField::new(unit(0, n)).unwrap(), VecField::new(x2).unwrap()]).unwrap()
}

pub fn example2() -> Frame {
    let n = 4;
    let mut x2 = unit(1, n);
    x2[3] = x(0, n).pow(2).scale(&rat(1, 2));
    let mut x3 = unit(2, n);
    x3[3] = x(1, n).pow(2).scale(&rat(1, 2));
    Frame::new(vec![
        VecField::new(unit(0, n)).unwrap(),
        VecField::new(x2).unwrap(),
        VecField::new(x3).unwrap(),
    ])
    .unwrap()
}

fn example_5d(k: u32, with_x2: bool) -> Frame {
    let n = 5;
    let mut x2 = unit(1, n);
    x2[2] = x(0, n);
    x2[4] = x(0, n).pow(2);
    let mut x3 = unit(3, n);
    x3[4] = if with_x2 {
        &x(0, n).pow(k) + &x(1, n).pow(k)
    } else {
        x(0, n).pow(k)
    };
    Frame::new(vec![
        VecField::new(unit(0, n)).unwrap(),
        VecField::new(x2).unwrap(),
        VecField::new(x3).unwrap(),
    ])
    .unwrap()
}

pub fn example3(k: u32) -> Frame {
    example_5d(k, false)
}

pub fn example4(k: u32) -> Frame {
    example_5d(k, true)
}

pub fn pt(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&a| int(a)).collect()
}
