use hyperfocus_core::gf2::{FieldElement as Fe, FieldError, FieldSpec, DEFAULT_POLYS};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Multiplication through discrete logs, built from a generator whose powers
/// are produced by shifting and reducing, independently of `FieldSpec::mul`.
struct LogTable {
    q: usize,
    log: Vec<usize>,
    exp: Vec<u32>,
}

impl LogTable {
    fn new(r: u32, poly: u32) -> Self {
        let q = 1usize << r;
        let xtime = |a: u32| {
            let s = a << 1;
            if s >> r & 1 == 1 { s ^ poly } else { s }
        };
        // Try X, then X + 1, as generator.
        for step in [0u32, 1] {
            let mut exp = Vec::with_capacity(q - 1);
            let mut log = vec![usize::MAX; q];
            let mut a = 1u32;
            let mut ok = true;
            for e in 0..q - 1 {
                if log[a as usize] != usize::MAX {
                    ok = false;
                    break;
                }
                log[a as usize] = e;
                exp.push(a);
                a = xtime(a) ^ if step == 1 { a } else { 0 };
            }
            if ok && a == 1 {
                return LogTable { q, log, exp };
            }
        }
        panic!("neither X nor X+1 generates GF(2^{r})");
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) % (self.q - 1)]
    }
}

fn spec(r: u32) -> FieldSpec {
    FieldSpec::with_degree(r).unwrap()
}

fn random(rng: &mut StdRng, f: &FieldSpec) -> Fe {
    Fe::from_raw(rng.gen_range(0..f.order()) as u16)
}

#[test]
fn multiplication_matches_log_tables() {
    for r in 1..=8 {
        let f = spec(r);
        let t = LogTable::new(r, f.poly());
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b).value(), t.mul(a.value(), b.value()), "r={r} {a}*{b}");
            }
        }
    }
    let f8 = spec(3);
    assert_eq!(f8.mul(Fe::from_raw(2), Fe::from_raw(4)), Fe::from_raw(3));
}

#[test]
fn ring_laws_on_random_triples() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for r in 2..=8 {
        let f = spec(r);
        for _ in 0..10_000 {
            let (a, b, c) = (random(&mut rng, &f), random(&mut rng, &f), random(&mut rng, &f));
            assert_eq!(f.add(a, b), f.add(b, a));
            assert_eq!(f.mul(a, b), f.mul(b, a));
            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        }
    }
}

#[test]
fn inverses_and_orders() {
    for r in 1..=8 {
        let f = spec(r);
        let q = f.order() as u64;
        for a in f.nonzero_elements() {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
            assert_eq!(f.pow(a, q - 1), Fe::ONE);
        }
        assert_eq!(f.inv(Fe::ONE).unwrap(), Fe::ONE);
        assert_eq!(f.inv(Fe::ZERO), Err(FieldError::ZeroInverse));
    }
}

#[test]
fn frobenius_is_additive() {
    for r in 1..=5 {
        let f = spec(r);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.square(f.add(a, b)), f.add(f.square(a), f.square(b)));
            }
        }
    }
    let f = spec(6);
    let mut rng = StdRng::seed_from_u64(6);
    for _ in 0..50 {
        let a = random(&mut rng, &f);
        assert_eq!(f.frob(a, 6), a);
        assert_eq!(f.sqrt(f.square(a)), a);
    }
}

#[test]
fn addition_examples() {
    let f = spec(3);
    let e = |v| f.element(v).unwrap();
    assert_eq!(f.add(e(5), e(5)), e(0));
    assert_eq!(f.add(e(5), e(0)), e(5));
    assert_eq!(f.add(e(3), e(6)), e(5));
    assert!(f.checked_add(e(3), Fe::from_raw(9)).is_err());
    assert!(f.checked_mul(Fe::from_raw(8), e(1)).is_err());
}

/// Irreducibility by trial division, the oracle for the constructor.
fn irreducible(poly: u32, r: u32) -> bool {
    let rem = |mut a: u32, b: u32| {
        let db = 31 - b.leading_zeros();
        while a != 0 && 31 - a.leading_zeros() >= db {
            a ^= b << (31 - a.leading_zeros() - db);
        }
        a
    };
    (2u32..1 << (r / 2 + 1)).all(|d| rem(poly, d) != 0)
}

#[test]
fn constructor_accepts_exactly_the_irreducibles() {
    // Numbers of irreducible polynomials of degree 2..=8 over GF(2).
    let counts = [1, 2, 3, 6, 9, 18, 30];
    for r in 2..=8u32 {
        let mut accepted = 0;
        for low in 0..1u32 << r {
            let poly = 1 << r | low;
            let ok = FieldSpec::new(r, Some(poly)).is_ok();
            assert_eq!(ok, irreducible(poly, r), "poly {poly:#x}");
            accepted += ok as usize;
        }
        assert_eq!(accepted, counts[r as usize - 2]);
    }
    for r in 1..=16 {
        assert_eq!(spec(r).poly(), DEFAULT_POLYS[r as usize]);
    }
    assert!(matches!(FieldSpec::new(0, None), Err(FieldError::DegreeOutOfRange(_))));
    assert!(matches!(FieldSpec::new(17, None), Err(FieldError::DegreeOutOfRange(_))));
    assert!(matches!(FieldSpec::new(4, Some(0b10101)), Err(FieldError::Reducible { .. })));
}
