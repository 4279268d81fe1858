//! Batches of paths generated from consecutive random streams.

use std::borrow::Cow;

use rayon::prelude::*;

use super::path::{AssumptionTag, SimPath};
use crate::error::Result;
use crate::rng::RngStream;

/// A finite, indexable family of paths sharing an assumption tag.
pub trait PathBatch: Sync {
    fn len(&self) -> usize;

    fn path(&self, i: usize) -> Result<Cow<'_, SimPath>>;

    fn tag(&self) -> AssumptionTag;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl PathBatch for [SimPath] {
    fn len(&self) -> usize {
        <[SimPath]>::len(self)
    }

    fn path(&self, i: usize) -> Result<Cow<'_, SimPath>> {
        Ok(Cow::Borrowed(&self[i]))
    }

    fn tag(&self) -> AssumptionTag {
        self.first().map_or(AssumptionTag::Sup, |p| p.tag)
    }
}

impl PathBatch for Vec<SimPath> {
    fn len(&self) -> usize {
        self.as_slice().len()
    }

    fn path(&self, i: usize) -> Result<Cow<'_, SimPath>> {
        self.as_slice().path(i)
    }

    fn tag(&self) -> AssumptionTag {
        self.as_slice().tag()
    }
}

/// Paths produced on demand: path `i` is `generate(base.offset(i))`.
pub struct GeneratedBatch<F> {
    n: usize,
    base: RngStream,
    tag: AssumptionTag,
    generate: F,
}

impl<F> GeneratedBatch<F>
where
    F: Fn(RngStream) -> Result<SimPath> + Sync,
{
    pub fn new(n: usize, base: RngStream, tag: AssumptionTag, generate: F) -> Self {
        Self { n, base, tag, generate }
    }

    /// Generates every path up front.
    pub fn materialize(&self) -> Result<Vec<SimPath>> {
        par_samples(self.n, self.base, |s| (self.generate)(s)).into_iter().collect()
    }
}

impl<F> PathBatch for GeneratedBatch<F>
where
    F: Fn(RngStream) -> Result<SimPath> + Sync,
{
    fn len(&self) -> usize {
        self.n
    }

    fn path(&self, i: usize) -> Result<Cow<'_, SimPath>> {
        (self.generate)(self.base.offset(i as u64)).map(Cow::Owned)
    }

    fn tag(&self) -> AssumptionTag {
        self.tag
    }
}

/// Another batch with every `H` multiplied by `factor`.
pub struct ScaledH<'a, B: ?Sized> {
    pub inner: &'a B,
    pub factor: f64,
}

impl<B: PathBatch + ?Sized> PathBatch for ScaledH<'_, B> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn path(&self, i: usize) -> Result<Cow<'_, SimPath>> {
        Ok(Cow::Owned(self.inner.path(i)?.scale_h(self.factor)))
    }

    fn tag(&self) -> AssumptionTag {
        self.inner.tag()
    }
}

/// Order-preserving parallel map over the paths of a batch.
pub fn map_paths<B, T, F>(batch: &B, f: F) -> Result<Vec<T>>
where
    B: PathBatch + ?Sized,
    T: Send,
    F: Fn(&SimPath) -> T + Sync + Send,
{
    (0..batch.len())
        .into_par_iter()
        .map(|i| batch.path(i).map(|p| f(&p)))
        .collect()
}

/// `f(base.offset(i))` for `i < n`, in index order.
pub fn par_samples<T, F>(n: usize, base: RngStream, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(RngStream) -> T + Sync + Send,
{
    (0..n as u64).into_par_iter().map(|i| f(base.offset(i))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::PExponent;
    use crate::sim::exact::{sharpness_block_path, simulate_exp_clock_process, BlockParams};

    #[test]
    fn generated_paths_are_reproducible() {
        let bp = BlockParams::new(0.5, 0.5, 3).unwrap();
        let batch = GeneratedBatch::new(50, RngStream::new(7, 100), AssumptionTag::Sup, |s| {
            Ok(sharpness_block_path(&bp, &mut s.rng()))
        });
        let all = batch.materialize().unwrap();
        for (i, p) in all.iter().enumerate() {
            assert_eq!(&*batch.path(i).unwrap(), p);
        }
        let ends = map_paths(&batch, |p| p.x_sup_end()).unwrap();
        let direct = map_paths(&all, |p| p.x_sup_end()).unwrap();
        assert_eq!(ends, direct);
    }

    #[test]
    fn par_samples_keeps_order_across_pools() {
        let f = |s: RngStream| crate::rng::uniform_open(&mut s.rng());
        let a = par_samples(1000, RngStream::new(1, 0), f);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| par_samples(1000, RngStream::new(1, 0), f));
        assert_eq!(a, b);
    }

    #[test]
    fn scaled_h_multiplies() {
        let p = PExponent::new(0.5).unwrap();
        let paths: Vec<SimPath> = (0..10)
            .map(|i| simulate_exp_clock_process(p, 2.0, 10, &mut RngStream::new(3, i).rng()).unwrap())
            .collect();
        let scaled = ScaledH { inner: &paths, factor: 0.01 };
        assert_eq!(scaled.len(), 10);
        assert_eq!(scaled.tag(), AssumptionTag::NoSup);
        assert_eq!(scaled.path(3).unwrap().h_end(), 0.01);
    }

    #[test]
    fn structural_invariants_over_a_thousand_paths() {
        let p = PExponent::new(0.4).unwrap();
        let bp = BlockParams::new(0.3, 0.7, 5).unwrap();
        let n = 1000;
        let base = RngStream::new(11, 0);
        let checks: Vec<Result<()>> = par_samples(n, base, |s| {
            let mut r = s.rng();
            sharpness_block_path(&bp, &mut r).validate()?;
            simulate_exp_clock_process(p, 4.0, 40, &mut r)?.validate()?;
            crate::sim::exact::alpha_construction_path(p, 3.0, 30, &mut r)?.validate()?;
            crate::sim::exact::simulate_convex_counterexample(0.5, 0.2, 0.5, 0.01, &mut r)?.validate()?;
            let spec = crate::sim::em::linear_sde(0.5, 0.5, 1.0)?;
            crate::sim::em::euler_maruyama(&spec, 1.0, 0.02, s)?.validate()
        });
        for c in checks {
            c.unwrap();
        }
    }
}
