//! Finite products and binary coproducts. Both are formed on the underlying
//! sets, with the initial (meet of components) and final (no cross homs)
//! structures respectively.

use super::{require_same_quantale, VCategory, VFunctor};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Product {
    pub object: VCategory,
    pub projections: Vec<VFunctor>,
}

#[derive(Debug, Clone)]
pub struct Coproduct {
    pub object: VCategory,
    pub injections: [VFunctor; 2],
}

pub fn product(x: &VCategory, y: &VCategory) -> Result<Product> {
    product_n(&[x.clone(), y.clone()])
}

/// Product of one or more factors. Objects are tuples `(a,b,…)` in
/// lexicographic order and `hom` is the componentwise meet.
pub fn product_n(factors: &[VCategory]) -> Result<Product> {
    let first = factors
        .first()
        .ok_or_else(|| Error::Precondition("product needs at least one factor".into()))?;
    for f in &factors[1..] {
        require_same_quantale(first, f)?;
    }
    let q = first.quantale().clone();
    let sizes: Vec<usize> = factors.iter().map(VCategory::len).collect();
    let count: usize = sizes.iter().product();

    let tuples: Vec<Vec<usize>> = (0..count)
        .map(|mut k| {
            let mut t = vec![0; sizes.len()];
            for (slot, &s) in t.iter_mut().zip(&sizes).rev() {
                *slot = k % s;
                k /= s;
            }
            t
        })
        .collect();
    let names = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t
                .iter()
                .zip(factors)
                .map(|(&i, f)| f.object_name(i))
                .collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let object = VCategory::from_fn(q.clone(), names, |a, b| {
        tuples[a]
            .iter()
            .zip(&tuples[b])
            .zip(factors)
            .fold(q.top(), |acc, ((&i, &j), f)| q.meet_pair(acc, f.hom(i, j)))
    })?;
    let projections = factors
        .iter()
        .enumerate()
        .map(|(p, f)| VFunctor::new(object.clone(), f.clone(), tuples.iter().map(|t| t[p]).collect()))
        .collect::<Result<_>>()?;
    Ok(Product {
        object,
        projections,
    })
}

/// Disjoint union with `⊥` between summands. Object names are kept when the
/// summands' names are disjoint and prefixed by `1.`/`2.` otherwise.
pub fn coproduct(x: &VCategory, y: &VCategory) -> Result<Coproduct> {
    require_same_quantale(x, y)?;
    let q = x.quantale().clone();
    let clash = x.objects().iter().any(|a| y.objects().contains(a));
    let names: Vec<String> = if clash {
        x.objects()
            .iter()
            .map(|a| format!("1.{a}"))
            .chain(y.objects().iter().map(|b| format!("2.{b}")))
            .collect()
    } else {
        x.objects().iter().chain(y.objects()).cloned().collect()
    };
    let (m, bottom) = (x.len(), q.bottom());
    let object = VCategory::from_fn(q, names, |a, b| match (a < m, b < m) {
        (true, true) => x.hom(a, b),
        (false, false) => y.hom(a - m, b - m),
        _ => bottom,
    })?;
    let injections = [
        VFunctor::new(x.clone(), object.clone(), (0..m).collect())?,
        VFunctor::new(y.clone(), object.clone(), (m..m + y.len()).collect())?,
    ];
    Ok(Coproduct { object, injections })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::quantale::Quantale;
    use crate::vcat::{
        enumerate_vcategories, enumerate_vfunctors, is_isomorphic, verify_vcategory,
        verify_vfunctor,
    };

    #[test]
    fn product_with_point_is_isomorphic() {
        let q = Arc::new(Quantale::truncated_plus(3));
        let x = VCategory::from_entries(
            q.clone(),
            &["a", "b"],
            &[("a", "b", "1"), ("b", "a", "2")],
        )
        .unwrap();
        let p = product(&x, &VCategory::point(q, "*")).unwrap();
        assert!(is_isomorphic(&p.object, &x).unwrap().is_some());
    }

    #[test]
    fn chain_squared() {
        let q = Arc::new(Quantale::two());
        let chain = VCategory::from_entries(q, &["a", "b"], &[("a", "b", "1")]).unwrap();
        let p = product(&chain, &chain).unwrap();
        assert_eq!(p.object.len(), 4);
        assert_eq!(p.object.hom_named("(a,a)", "(b,b)").unwrap(), "1");
        assert_eq!(p.object.hom_named("(a,b)", "(b,a)").unwrap(), "0");
        assert_eq!(p.object.hom_named("(a,b)", "(b,b)").unwrap(), "1");
        for pr in &p.projections {
            assert!(verify_vfunctor(pr).holds());
        }
    }

    #[test]
    fn product_universal_property_by_enumeration() {
        // every pair of functors T → X, T → Y factors uniquely through X × Y
        let q = Arc::new(Quantale::two());
        let chain = VCategory::from_entries(q.clone(), &["a", "b"], &[("a", "b", "1")]).unwrap();
        let disc = VCategory::discrete(q.clone(), &["p", "q"]);
        let p = product(&chain, &disc).unwrap();
        for t in enumerate_vcategories(&q, 2) {
            let into_p = enumerate_vfunctors(&t, &p.object).unwrap();
            let pairs: Vec<(Vec<usize>, Vec<usize>)> = into_p
                .iter()
                .map(|h| {
                    (
                        h.then(&p.projections[0]).unwrap().map().to_vec(),
                        h.then(&p.projections[1]).unwrap().map().to_vec(),
                    )
                })
                .collect();
            let expected = enumerate_vfunctors(&t, &chain).unwrap().len()
                * enumerate_vfunctors(&t, &disc).unwrap().len();
            let mut dedup = pairs.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), pairs.len(), "factorisation is unique");
            assert_eq!(pairs.len(), expected, "every cone factors");
        }
    }

    #[test]
    fn product_uses_meet() {
        let q = Arc::new(Quantale::truncated_plus(3));
        let x = VCategory::symmetric_from_entries(q.clone(), &["a", "a'"], &[("a", "a'", "1")]).unwrap();
        let y = VCategory::symmetric_from_entries(q, &["b", "b'"], &[("b", "b'", "2")]).unwrap();
        let p = product(&x, &y).unwrap();
        assert_eq!(p.object.hom_named("(a,b)", "(a',b')").unwrap(), "2");
        assert!(verify_vcategory(&p.object).holds());
    }

    #[test]
    fn coproduct_examples() {
        let q = Arc::new(Quantale::truncated_plus(3));
        let x = VCategory::symmetric_from_entries(q.clone(), &["a", "b"], &[("a", "b", "1")]).unwrap();
        let e = VCategory::empty(q.clone());
        let s = coproduct(&e, &x).unwrap();
        assert!(is_isomorphic(&s.object, &x).unwrap().is_some());

        let one = VCategory::point(q.clone(), "*");
        let two_points = coproduct(&one, &one).unwrap();
        assert_eq!(two_points.object.objects(), &["1.*", "2.*"]);
        assert!(is_isomorphic(&two_points.object, &VCategory::discrete(q.clone(), &["u", "v"]))
            .unwrap()
            .is_some());

        let y = VCategory::point(q, "c");
        let s = coproduct(&x, &y).unwrap();
        assert_eq!(s.object.hom_named("a", "c").unwrap(), "∞");
        assert_eq!(s.object.hom_named("a", "b").unwrap(), "1");
        assert!(verify_vcategory(&s.object).holds());
        for inj in &s.injections {
            assert!(verify_vfunctor(inj).holds());
        }
    }
}
