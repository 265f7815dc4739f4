//! Truncated multivariate Taylor jets up to order four.
//!
//! A jet stores the Taylor coefficients `c_α` of a smooth function around an
//! expansion point, one per monomial `x^α` with `|α| ≤ order`. Each monomial
//! corresponds to exactly one nondecreasing index tuple, so mixed partials are
//! symmetric by construction: `∂^α f = α! · c_α`.
//!
//! Coefficients are ordered by total degree, which makes truncation to a lower
//! order a prefix operation. Products use a precomputed table of monomial pairs,
//! and elementary functions are applied by composing their Taylor series with the
//! nilpotent part of the argument, which is exact up to rounding.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Element;

/// Highest derivative order a jet can carry.
pub const MAX_JET_ORDER: usize = 4;

/// Largest number of independent variables supported.
pub const MAX_JET_VARS: usize = 10;

/// Monomial bookkeeping for a fixed number of variables.
#[derive(Debug)]
pub struct JetLayout {
    nvars: usize,
    exponents: Vec<Vec<u8>>,
    /// `offsets[d]` is the index of the first monomial of degree `d`.
    offsets: [usize; MAX_JET_ORDER + 2],
    lookup: HashMap<Vec<u8>, u32>,
    /// `(a, b, c)` with `x^a · x^b = x^c`, sorted by `deg(c)`.
    products: Vec<(u32, u32, u32)>,
    /// Number of product entries with `deg(c) ≤ k`.
    product_counts: [usize; MAX_JET_ORDER + 1],
    /// `raise[v][i]` is the index of `x^i · x_v`, or `u32::MAX` past the top degree.
    raise: Vec<Vec<u32>>,
    /// `α!` per monomial.
    factorials: Vec<f64>,
}

fn monomials_of_degree(nvars: usize, degree: usize) -> Vec<Vec<u8>> {
    fn rec(var: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if var + 1 == cur.len() {
            cur[var] = left as u8;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[var] = e as u8;
            rec(var + 1, left - e, cur, out);
        }
        cur[var] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u8; nvars];
    rec(0, degree, &mut cur, &mut out);
    out
}

impl JetLayout {
    fn build(nvars: usize) -> Self {
        assert!((1..=MAX_JET_VARS).contains(&nvars), "jet variable count out of range");
        let mut exponents = Vec::new();
        let mut offsets = [0usize; MAX_JET_ORDER + 2];
        for d in 0..=MAX_JET_ORDER {
            offsets[d] = exponents.len();
            exponents.extend(monomials_of_degree(nvars, d));
        }
        offsets[MAX_JET_ORDER + 1] = exponents.len();
        let lookup: HashMap<Vec<u8>, u32> =
            exponents.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let degree = |e: &[u8]| e.iter().map(|&x| x as usize).sum::<usize>();

        let mut products = Vec::new();
        for (a, ea) in exponents.iter().enumerate() {
            for (b, eb) in exponents.iter().enumerate() {
                if degree(ea) + degree(eb) > MAX_JET_ORDER {
                    continue;
                }
                let ec: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                products.push((a as u32, b as u32, lookup[&ec]));
            }
        }
        products.sort_by_key(|&(_, _, c)| c);
        let mut product_counts = [0usize; MAX_JET_ORDER + 1];
        for (k, slot) in product_counts.iter_mut().enumerate() {
            *slot = products.iter().filter(|&&(_, _, c)| (c as usize) < offsets[k + 1]).count();
        }

        let raise = (0..nvars)
            .map(|v| {
                exponents
                    .iter()
                    .map(|e| {
                        let mut r = e.clone();
                        r[v] += 1;
                        lookup.get(&r).copied().unwrap_or(u32::MAX)
                    })
                    .collect()
            })
            .collect();

        let factorials = exponents
            .iter()
            .map(|e| e.iter().map(|&k| (1..=k as u64).product::<u64>() as f64).product())
            .collect();

        Self { nvars, exponents, offsets, lookup, products, product_counts, raise, factorials }
    }

    /// Shared layout for `nvars` variables; built once per process.
    pub fn shared(nvars: usize) -> Arc<JetLayout> {
        static CACHE: OnceLock<Mutex<Vec<Option<Arc<JetLayout>>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(vec![None; MAX_JET_VARS + 1]));
        let mut guard = cache.lock().expect("jet layout cache poisoned");
        guard[nvars].get_or_insert_with(|| Arc::new(JetLayout::build(nvars))).clone()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Number of coefficients in a jet of the given order.
    #[inline]
    pub fn len(&self, order: usize) -> usize {
        self.offsets[order + 1]
    }

    fn index_of(&self, idx: &[usize]) -> Option<usize> {
        let mut e = vec![0u8; self.nvars];
        for &i in idx {
            *e.get_mut(i)? += 1;
        }
        self.lookup.get(&e).map(|&k| k as usize)
    }
}

/// A smooth function's value and all partial derivatives up to `order` at a point.
#[derive(Clone)]
pub struct Jet<T> {
    layout: Arc<JetLayout>,
    order: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> fmt::Debug for Jet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("nvars", &self.layout.nvars)
            .field("order", &self.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl<T: Scalar> Jet<T> {
    pub fn constant(layout: &Arc<JetLayout>, order: usize, value: T) -> Self {
        let mut coeffs = vec![T::zero(); layout.len(order)];
        coeffs[0] = value;
        Self { layout: layout.clone(), order, coeffs }
    }

    /// The coordinate function `x_var` expanded at `value`.
    pub fn variable(layout: &Arc<JetLayout>, order: usize, value: T, var: usize) -> Self {
        let mut j = Self::constant(layout, order, value);
        if order > 0 {
            j.coeffs[layout.offsets[1] + var] = T::one();
        }
        j
    }

    /// Coordinate jets for every variable at point `x`.
    pub fn variables(x: &[T], order: usize) -> Result<Vec<Self>> {
        if order > MAX_JET_ORDER {
            return Err(Error::OrderUnsupported { requested: order, max: MAX_JET_ORDER });
        }
        let layout = JetLayout::shared(x.len());
        Ok(x.iter().enumerate().map(|(v, &xv)| Self::variable(&layout, order, xv, v)).collect())
    }

    pub fn layout(&self) -> &Arc<JetLayout> {
        &self.layout
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.layout.nvars
    }

    #[inline]
    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Partial derivative along the index tuple `idx` (any order of indices).
    pub fn partial(&self, idx: &[usize]) -> Result<T> {
        if idx.len() > self.order {
            return Err(Error::InsufficientOrder { needed: idx.len(), available: self.order });
        }
        let k = self.layout.index_of(idx).expect("partial index out of range");
        Ok(self.coeffs[k] * T::lit(self.layout.factorials[k]))
    }

    /// First partials as a vector.
    pub fn gradient(&self) -> Result<Vec<T>> {
        (0..self.nvars()).map(|i| self.partial(&[i])).collect()
    }

    /// Drops every coefficient above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self {
            layout: self.layout.clone(),
            order,
            coeffs: self.coeffs[..self.layout.len(order)].to_vec(),
        }
    }

    /// The jet of `∂f/∂x_var`, one order lower.
    pub fn derivative(&self, var: usize) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::InsufficientOrder { needed: 1, available: 0 });
        }
        let order = self.order - 1;
        let len = self.layout.len(order);
        let raise = &self.layout.raise[var];
        let coeffs = (0..len)
            .map(|i| {
                let r = raise[i] as usize;
                let e = self.layout.exponents[r][var];
                self.coeffs[r] * T::lit(e as f64)
            })
            .collect();
        Ok(Self { layout: self.layout.clone(), order, coeffs })
    }

    fn check_compatible(&self, o: &Self) {
        assert!(
            Arc::ptr_eq(&self.layout, &o.layout),
            "jets over different variable sets cannot be combined"
        );
    }

    fn product(&self, o: &Self) -> Self {
        self.check_compatible(o);
        let order = self.order.min(o.order);
        let mut out = vec![T::zero(); self.layout.len(order)];
        self.product_into(o, order, &mut out);
        Self { layout: self.layout.clone(), order, coeffs: out }
    }

    #[inline]
    fn product_into(&self, o: &Self, order: usize, out: &mut [T]) {
        let table = &self.layout.products[..self.layout.product_counts[order]];
        let (a, b) = (&self.coeffs, &o.coeffs);
        for &(i, j, k) in table {
            out[k as usize] = out[k as usize] + a[i as usize] * b[j as usize];
        }
    }

    /// Applies a univariate function given its derivatives `d[k] = f^(k)(value)`.
    pub fn compose(&self, d: &[T]) -> Self {
        debug_assert!(d.len() > self.order);
        let mut h = self.clone();
        h.coeffs[0] = T::zero();
        let mut out = Self::constant(&self.layout, self.order, d[0]);
        let mut power = h.clone();
        let mut fact = T::one();
        for k in 1..=self.order {
            fact = fact * T::from_usize_lossy(k);
            let c = d[k] / fact;
            for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                *o = *o + c * *p;
            }
            if k < self.order {
                power = power.product(&h);
            }
        }
        out
    }

    pub fn sin(&self) -> Self {
        let (s, c) = (self.value().sin(), self.value().cos());
        self.compose(&[s, c, -s, -c, s])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = (self.value().sin(), self.value().cos());
        self.compose(&[c, -s, -c, s, c])
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.compose(&[s, c, s, c, s])
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.compose(&[c, s, c, s, c])
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(&[e; MAX_JET_ORDER + 1])
    }

    pub fn ln(&self) -> Self {
        let x = self.value();
        let r = x.recip();
        let (two, six) = (T::lit(2.0), T::lit(6.0));
        self.compose(&[x.ln(), r, -r * r, two * r * r * r, -six * r * r * r * r])
    }

    /// Real power `x^p`; the value must be positive unless `p` is a small integer.
    pub fn powf(&self, p: T) -> Self {
        let x = self.value();
        let mut d = [T::zero(); MAX_JET_ORDER + 1];
        let mut coeff = T::one();
        for (k, slot) in d.iter_mut().enumerate() {
            *slot = coeff * x.powf(p - T::from_usize_lossy(k));
            coeff = coeff * (p - T::from_usize_lossy(k));
        }
        self.compose(&d)
    }

    pub fn powi(&self, p: i32) -> Self {
        if p >= 0 {
            let mut out = Self::constant(&self.layout, self.order, T::one());
            for _ in 0..p {
                out = out.product(self);
            }
            return out;
        }
        let x = self.value();
        let mut d = [T::zero(); MAX_JET_ORDER + 1];
        let mut coeff = T::one();
        for (k, slot) in d.iter_mut().enumerate() {
            *slot = coeff * x.powi(p - k as i32);
            coeff = coeff * T::lit((p - k as i32) as f64);
        }
        self.compose(&d)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(T::lit(0.5))
    }

    pub fn recip(&self) -> Self {
        self.powi(-1)
    }

    pub fn square(&self) -> Self {
        self.product(self)
    }

    pub fn add_scalar(&self, c: T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0] + c;
        out
    }

    fn zip_with(&self, o: &Self, f: impl Fn(T, T) -> T) -> Self {
        self.check_compatible(o);
        let order = self.order.min(o.order);
        let len = self.layout.len(order);
        let coeffs = self.coeffs[..len].iter().zip(&o.coeffs[..len]).map(|(a, b)| f(*a, *b)).collect();
        Self { layout: self.layout.clone(), order, coeffs }
    }
}

impl<T: Scalar> Element<T> for Jet<T> {
    fn zero_like(&self) -> Self {
        Self::constant(&self.layout, self.order, T::zero())
    }

    fn constant_like(&self, c: T) -> Self {
        Self::constant(&self.layout, self.order, c)
    }

    fn plus(&self, o: &Self) -> Self {
        self.zip_with(o, |a, b| a + b)
    }

    fn minus(&self, o: &Self) -> Self {
        self.zip_with(o, |a, b| a - b)
    }

    fn times(&self, o: &Self) -> Self {
        self.product(o)
    }

    fn scaled(&self, c: T) -> Self {
        Self { layout: self.layout.clone(), order: self.order, coeffs: self.coeffs.iter().map(|v| *v * c).collect() }
    }

    fn acc_product(&mut self, a: &Self, b: &Self) {
        a.check_compatible(b);
        let order = self.order.min(a.order).min(b.order);
        if order < self.order {
            self.coeffs.truncate(self.layout.len(order));
            self.order = order;
        }
        let table = &self.layout.products[..self.layout.product_counts[order]];
        for &(i, j, k) in table {
            let k = k as usize;
            self.coeffs[k] = self.coeffs[k] + a.coeffs[i as usize] * b.coeffs[j as usize];
        }
    }

    fn acc_scaled(&mut self, a: &Self, c: T) {
        let order = self.order.min(a.order);
        if order < self.order {
            self.coeffs.truncate(self.layout.len(order));
            self.order = order;
        }
        for (s, v) in self.coeffs.iter_mut().zip(&a.coeffs) {
            *s = *s + c * *v;
        }
    }

    fn value(&self) -> T {
        self.coeffs[0]
    }
}

macro_rules! jet_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<T: Scalar> $tr<&Jet<T>> for &Jet<T> {
            type Output = Jet<T>;
            fn $m(self, o: &Jet<T>) -> Jet<T> {
                let f: fn(&Jet<T>, &Jet<T>) -> Jet<T> = $body;
                f(self, o)
            }
        }
        impl<T: Scalar> $tr<Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $m(self, o: Jet<T>) -> Jet<T> {
                (&self).$m(&o)
            }
        }
        impl<T: Scalar> $tr<&Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $m(self, o: &Jet<T>) -> Jet<T> {
                (&self).$m(o)
            }
        }
        impl<T: Scalar> $tr<Jet<T>> for &Jet<T> {
            type Output = Jet<T>;
            fn $m(self, o: Jet<T>) -> Jet<T> {
                self.$m(&o)
            }
        }
    };
}

jet_binop!(Add, add, |a, b| a.plus(b));
jet_binop!(Sub, sub, |a, b| a.minus(b));
jet_binop!(Mul, mul, |a, b| a.product(b));
jet_binop!(Div, div, |a, b| a.product(&b.recip()));

macro_rules! jet_scalar_ops {
    ($t:ty) => {
        impl Add<$t> for Jet<$t> {
            type Output = Jet<$t>;
            fn add(self, c: $t) -> Jet<$t> {
                self.add_scalar(c)
            }
        }
        impl Add<$t> for &Jet<$t> {
            type Output = Jet<$t>;
            fn add(self, c: $t) -> Jet<$t> {
                self.add_scalar(c)
            }
        }
        impl Sub<$t> for Jet<$t> {
            type Output = Jet<$t>;
            fn sub(self, c: $t) -> Jet<$t> {
                self.add_scalar(-c)
            }
        }
        impl Mul<$t> for Jet<$t> {
            type Output = Jet<$t>;
            fn mul(self, c: $t) -> Jet<$t> {
                self.scaled(c)
            }
        }
        impl Mul<$t> for &Jet<$t> {
            type Output = Jet<$t>;
            fn mul(self, c: $t) -> Jet<$t> {
                self.scaled(c)
            }
        }
        impl Mul<Jet<$t>> for $t {
            type Output = Jet<$t>;
            fn mul(self, j: Jet<$t>) -> Jet<$t> {
                j.scaled(self)
            }
        }
        impl Mul<&Jet<$t>> for $t {
            type Output = Jet<$t>;
            fn mul(self, j: &Jet<$t>) -> Jet<$t> {
                j.scaled(self)
            }
        }
        impl Div<$t> for Jet<$t> {
            type Output = Jet<$t>;
            fn div(self, c: $t) -> Jet<$t> {
                self.scaled(1.0 / c)
            }
        }
    };
}

jet_scalar_ops!(f32);
jet_scalar_ops!(f64);

impl<T: Scalar> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.scaled(-T::one())
    }
}

impl<T: Scalar> Neg for &Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.scaled(-T::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_counts_match_binomials() {
        let l = JetLayout::shared(3);
        // C(3+4, 4) monomials of degree ≤ 4 in 3 variables
        assert_eq!(l.len(4), 35);
        assert_eq!(l.len(1), 4);
        // pairs with deg(a)+deg(b) ≤ 4 equal monomials of degree ≤ 4 in 6 variables
        assert_eq!(l.product_counts[4], 210);
    }

    #[test]
    fn derivative_lowers_order() {
        let v = Jet::<f64>::variables(&[0.3, 0.2], 3).unwrap();
        let f = &v[0] * &v[0] * &v[1];
        let d = f.derivative(0).unwrap();
        assert_eq!(d.order(), 2);
        assert!((d.value() - 2.0 * 0.3 * 0.2).abs() < 1e-15);
        assert!((d.partial(&[1]).unwrap() - 0.6).abs() < 1e-15);
    }
}
