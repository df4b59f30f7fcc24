//! Seeded randomized consistency checks behind `gwdeg selftest`.

use std::fmt;

use gwdeg_core::{
    check_poincare_hopf, get_invariants, get_witt_decomposition, global_unstable_degree, is_isomorphic_gw, resultant,
    FieldSpec, GrothendieckWittClass, Matrix, Polynomial, PointedRationalFunction, Scalar,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct CheckReport {
    pub name: &'static str,
    pub cases: usize,
    pub passed: bool,
    pub detail: Option<String>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.detail {
            None => write!(f, "{} {} ({} cases)", if self.passed { "PASS" } else { "FAIL" }, self.name, self.cases),
            Some(d) => write!(f, "{} {} ({} cases): {d}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.cases),
        }
    }
}

type Check = Result<(), String>;

pub fn run(seed: u64, cases: usize) -> Vec<CheckReport> {
    let checks: [(&'static str, fn(&mut ChaCha8Rng) -> Check); 5] = [
        ("hasse product formula", hasse_product),
        ("congruence invariance", congruence),
        ("witt reassembly", witt_reassembly),
        ("det bezoutian = sign resultant", bezoutian_resultant),
        ("poincare-hopf", poincare_hopf),
    ];
    checks
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let result = (0..cases).try_for_each(|_| check(&mut rng));
            CheckReport { name, cases, passed: result.is_ok(), detail: result.err() }
        })
        .collect()
}

fn nonzero(rng: &mut ChaCha8Rng, field: FieldSpec, bound: i64) -> Scalar {
    loop {
        let s = Scalar::from_int(field, rng.gen_range(-bound..=bound));
        if !s.is_zero() {
            return s;
        }
    }
}

fn random_diagonal(rng: &mut ChaCha8Rng) -> GrothendieckWittClass {
    let n = rng.gen_range(1..=4);
    let entries: Vec<Scalar> = (0..n).map(|_| nonzero(rng, FieldSpec::Rationals, 40)).collect();
    GrothendieckWittClass::over_field(FieldSpec::Rationals, &Matrix::diagonal(&entries)).expect("nonzero diagonal")
}

fn e(r: gwdeg_core::Result<impl Sized>) -> Result<(), String> {
    r.map(|_| ()).map_err(|e| e.to_string())
}

fn hasse_product(rng: &mut ChaCha8Rng) -> Check {
    let beta = random_diagonal(rng);
    let inv = get_invariants(&beta).map_err(|e| e.to_string())?;
    let product: i32 = inv.hasse.as_ref().map_or(1, |h| h.values().map(|&v| v as i32).product());
    if product != 1 {
        return Err(format!("product of Hasse invariants is -1 for\n{beta}"));
    }
    Ok(())
}

fn congruence(rng: &mut ChaCha8Rng) -> Check {
    let beta = random_diagonal(rng);
    let n = beta.rank();
    let field = FieldSpec::Rationals;
    let p = loop {
        let p = Matrix::from_fn(n, n, |_, _| Scalar::from_int(field, rng.gen_range(-3..=3)));
        if !p.det().map_err(|e| e.to_string())?.is_zero() {
            break p;
        }
    };
    let m = beta.scalar_matrix().expect("field class");
    let moved = GrothendieckWittClass::over_field(field, &p.transpose().mul(&m).mul(&p)).map_err(|e| e.to_string())?;
    match is_isomorphic_gw(&beta, &moved) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("congruent forms judged non-isomorphic:\n{beta}\n{moved}")),
        Err(err) => Err(err.to_string()),
    }
}

fn witt_reassembly(rng: &mut ChaCha8Rng) -> Check {
    let beta = random_diagonal(rng);
    let w = get_witt_decomposition(&beta).map_err(|e| e.to_string())?;
    match is_isomorphic_gw(&beta, &w.to_class()) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("Witt decomposition is not isomorphic to\n{beta}")),
        Err(err) => Err(err.to_string()),
    }
}

fn random_function(rng: &mut ChaCha8Rng, field: FieldSpec) -> PointedRationalFunction {
    loop {
        let n = rng.gen_range(1..=5);
        let mut f: Vec<Scalar> = (0..n).map(|_| Scalar::from_int(field, rng.gen_range(-6..=6))).collect();
        f.push(Scalar::one(field));
        let dg = rng.gen_range(0..n);
        let mut g: Vec<Scalar> = (0..dg).map(|_| Scalar::from_int(field, rng.gen_range(-6..=6))).collect();
        g.push(nonzero(rng, field, 6));
        if let Ok(q) = PointedRationalFunction::new(Polynomial::new(field, f), Polynomial::new(field, g)) {
            return q;
        }
    }
}

fn bezoutian_resultant(rng: &mut ChaCha8Rng) -> Check {
    let q = random_function(rng, FieldSpec::Rationals);
    let n = q.degree();
    let deg = global_unstable_degree(&q).map_err(|e| e.to_string())?;
    let res = resultant(q.numerator(), q.denominator()).map_err(|e| e.to_string())?;
    let signed = if (n * (n - 1) / 2).is_multiple_of(2) { res } else { -res };
    if deg.base_scalar() != Some(signed) {
        return Err(format!("det Bez != sign Res for {q}"));
    }
    e(deg.gw().scalar_matrix().expect("field class").det())
}

fn poincare_hopf(rng: &mut ChaCha8Rng) -> Check {
    let field = if rng.gen_bool(0.5) { FieldSpec::Rationals } else { FieldSpec::prime(7).expect("prime") };
    // a split numerator: product of (x - r)^m over distinct r
    let q = loop {
        let k = rng.gen_range(1..=3);
        let mut roots: Vec<i64> = Vec::new();
        while roots.len() < k {
            let r = rng.gen_range(-3..=3);
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        let f = roots.iter().fold(Polynomial::one(field), |acc, &r| {
            let m = rng.gen_range(1..=2);
            &acc * &Polynomial::linear(&Scalar::from_int(field, r)).pow(m)
        });
        let n = f.degree().expect("nonzero");
        let mut g: Vec<Scalar> = (0..rng.gen_range(0..n)).map(|_| Scalar::from_int(field, rng.gen_range(-6..=6))).collect();
        g.push(nonzero(rng, field, 6));
        if let Ok(q) = PointedRationalFunction::new(f, Polynomial::new(field, g)) {
            break q;
        }
    };
    let roots = gwdeg_core::degree::rational_roots(&q).ok_or_else(|| format!("roots of {q} not found"))?;
    match check_poincare_hopf(&q, &roots) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("local degrees do not sum to the global degree for {q}")),
        Err(err) => Err(err.to_string()),
    }
}
