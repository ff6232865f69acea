use num_traits::One;

use super::{Module, ModuleElement, ModulePresentation};
use crate::error::{Error, Result};
use crate::ground::{GroundMatrix, Lattice, Scalar};
use crate::ring::RingElement;

/// Homogeneous map of degree `degree`: `f(r g_i) = r f(g_i)`.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub source: Module,
    pub target: Module,
    pub degree: i64,
    /// `images[i] = f(g_i)`, a target element of degree `shift_i + degree`.
    pub images: Vec<ModuleElement>,
}

/// Kernel presentation found degreewise on a window.
#[derive(Debug, Clone)]
pub struct KernelReport {
    pub module: Module,
    pub inclusion: ModuleMap,
    /// Degrees on which generators and relations were searched exhaustively.
    pub window: (i64, i64),
}

impl ModuleMap {
    pub fn new(source: &Module, target: &Module, degree: i64, images: Vec<ModuleElement>) -> Result<ModuleMap> {
        source.same_ring(target)?;
        if images.len() != source.rank() {
            return Err(Error::ShapeMismatch(format!(
                "{} images for {} source generators",
                images.len(),
                source.rank()
            )));
        }
        let ring = source.ring();
        let mut normal = Vec::with_capacity(images.len());
        for (i, img) in images.into_iter().enumerate() {
            if img.len() != target.rank() {
                return Err(Error::ShapeMismatch(format!(
                    "image with {} entries in a module of rank {}",
                    img.len(),
                    target.rank()
                )));
            }
            let img: ModuleElement = img.iter().map(|e| ring.normal_form(e)).collect::<Result<_>>()?;
            match target.element_degree(&img)? {
                Some(d) if d != source.shifts()[i] + degree => {
                    return Err(Error::Inhomogeneous(format!(
                        "image of generator {i} has degree {d}, expected {}",
                        source.shifts()[i] + degree
                    )))
                }
                _ => {}
            }
            normal.push(img);
        }
        let f = ModuleMap { source: source.clone(), target: target.clone(), degree, images: normal };
        for (row, delta) in source.relations().iter().zip(source.relation_degrees()) {
            let img = f.apply(row)?;
            if !target.is_zero_element(delta + degree, &img)? {
                return Err(Error::Validation(format!(
                    "relation {:?} is not sent to zero",
                    source.format_element(row)
                )));
            }
        }
        Ok(f)
    }

    pub fn identity(m: &Module) -> ModuleMap {
        let images = (0..m.rank()).map(|i| m.generator(i)).collect();
        ModuleMap { source: m.clone(), target: m.clone(), degree: 0, images }
    }

    /// Multiplication by a homogeneous ring element.
    pub fn multiplication(m: &Module, r: &RingElement) -> Result<ModuleMap> {
        let ring = m.ring();
        let d = ring.homogeneous_degree(r)?.unwrap_or(0);
        let images = (0..m.rank())
            .map(|i| m.generator(i).iter().map(|e| ring.mul(r, e)).collect::<Result<ModuleElement>>())
            .collect::<Result<Vec<_>>>()?;
        ModuleMap::new(m, m, d, images)
    }

    /// `Σ x_i f(g_i)`.
    pub fn apply(&self, x: &[RingElement]) -> Result<ModuleElement> {
        let ring = self.source.ring();
        let mut out = vec![RingElement::zero(); self.target.rank()];
        for (xi, img) in x.iter().zip(&self.images) {
            if xi.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(img) {
                if !e.is_zero() {
                    *o = ring.add(o, &ring.mul_reduced(xi, e)?);
                }
            }
        }
        Ok(out)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &ModuleMap) -> Result<ModuleMap> {
        let images = g.images.iter().map(|x| self.apply(x)).collect::<Result<Vec<_>>>()?;
        ModuleMap::new(&g.source, &self.target, g.degree + self.degree, images)
    }

    /// `self ∘ g` without re-validating relations; for composites whose
    /// vanishing is itself being tested.
    pub fn compose_unchecked(&self, g: &ModuleMap) -> Result<ModuleMap> {
        let images = g.images.iter().map(|x| self.apply(x)).collect::<Result<Vec<_>>>()?;
        Ok(ModuleMap { source: g.source.clone(), target: self.target.clone(), degree: g.degree + self.degree, images })
    }

    /// Matrix from free coordinates of the source in degree `d` to free
    /// coordinates of the target in degree `d + degree`.
    pub fn matrix_at(&self, d: i64) -> Result<GroundMatrix> {
        let ring = self.source.ring();
        let src = self.source.degree_data(d)?;
        let tgt = self.target.degree_data(d + self.degree)?;
        let mut columns = Vec::with_capacity(src.dim());
        for j in 0..src.dim() {
            let (i, m) = src.locate(j);
            let m = RingElement::monomial(m.clone(), Scalar::one());
            let img: ModuleElement =
                self.images[i].iter().map(|e| ring.mul_reduced(&m, e)).collect::<Result<_>>()?;
            columns.push(tgt.coordinates(ring, &img)?);
        }
        Ok(GroundMatrix::from_columns(&columns, tgt.dim()))
    }

    /// Kernel in degree `d` as a lattice of source free coordinates; it
    /// contains the source relations.
    pub fn kernel_lattice(&self, d: i64) -> Result<Lattice> {
        let tgt = self.target.degree_data(d + self.degree)?;
        let a = self.matrix_at(d)?;
        Lattice::preimage(self.source.ring().ground(), &a, &tgt.relations)
    }

    /// Image plus target relations in degree `d + degree`.
    pub fn image_lattice(&self, d: i64) -> Result<Lattice> {
        let k = self.source.ring().ground();
        let tgt = self.target.degree_data(d + self.degree)?;
        let a = self.matrix_at(d)?;
        let cols = (0..a.cols()).map(|j| a.column(j));
        Ok(Lattice::span(k, tgt.dim(), cols.chain(tgt.relations.basis().iter().cloned())))
    }

    pub fn is_surjective_at(&self, d: i64) -> Result<bool> {
        let k = self.source.ring().ground();
        let img = self.image_lattice(d)?;
        Ok(img.contains_lattice(k, &Lattice::full(k, img.dim())))
    }

    pub fn is_injective_at(&self, d: i64) -> Result<bool> {
        let k = self.source.ring().ground();
        let src = self.source.degree_data(d)?;
        Ok(src.relations.contains_lattice(k, &self.kernel_lattice(d)?))
    }

    pub fn is_zero_at(&self, d: i64) -> Result<bool> {
        let k = self.source.ring().ground();
        let tgt = self.target.degree_data(d + self.degree)?;
        let a = self.matrix_at(d)?;
        Ok((0..a.cols()).all(|j| tgt.relations.contains(k, &a.column(j))))
    }

    /// Target modulo the image.
    pub fn cokernel(&self) -> Result<Module> {
        let mut rels = self.target.relations().to_vec();
        rels.extend(self.images.iter().cloned());
        ModulePresentation::new(self.source.ring(), self.target.names().to_vec(), self.target.shifts().to_vec(), rels)
    }

    /// Presents the kernel from degreewise data on `window`: generators are
    /// taken lowest degree first among canonical echelon rows not yet
    /// generated, and relations are found the same way.
    pub fn kernel(&self, window: (i64, i64)) -> Result<KernelReport> {
        let gens = self.kernel_generators(window, &[])?;
        self.present_kernel(gens, window)
    }

    /// Homogeneous kernel generators on `window`, lowest degree first.
    ///
    /// A candidate is skipped when it lies in the span of earlier choices
    /// plus `ideal0 * K_d`; with `ideal0` the degree-0 part of the maximal
    /// ideal this makes the choice minimal in each degree.
    pub fn kernel_generators(&self, window: (i64, i64), ideal0: &[RingElement]) -> Result<Vec<(ModuleElement, i64)>> {
        let source = &self.source;
        choose_generators(source, window, ideal0, |d| self.kernel_lattice(d))
    }

    fn present_kernel(&self, gens: Vec<(ModuleElement, i64)>, window: (i64, i64)) -> Result<KernelReport> {
        let ring = self.source.ring();
        let k = ring.ground();
        let mut relations: Vec<ModuleElement> = Vec::new();
        let mut relation_degrees: Vec<i64> = Vec::new();
        for d in window.0..=window.1 {
            let src = self.source.degree_data(d)?;
            let live: Vec<&(ModuleElement, i64)> = gens.iter().filter(|g| g.1 <= d).collect();
            if live.is_empty() {
                continue;
            }
            // syzygies among the generators modulo source relations
            let free = ModulePresentation::free(ring, live.iter().map(|g| g.1).collect())?;
            let fd = free.degree_data(d)?;
            let mut columns = Vec::with_capacity(fd.dim());
            for j in 0..fd.dim() {
                let (i, m) = fd.locate(j);
                let m = RingElement::monomial(m.clone(), Scalar::one());
                let img: ModuleElement = live[i].0.iter().map(|e| ring.mul_reduced(&m, e)).collect::<Result<_>>()?;
                columns.push(src.coordinates(ring, &img)?);
            }
            let phi = GroundMatrix::from_columns(&columns, src.dim());
            let syz = Lattice::preimage(k, &phi, &src.relations)?;
            let mut known = fd.relations.clone();
            for (row, delta) in relations.iter().zip(&relation_degrees) {
                let mut padded = row.clone();
                padded.resize(live.len(), RingElement::zero());
                for m in ring.reduced_monomials(d - delta) {
                    let m = RingElement::monomial(m, Scalar::one());
                    let x: ModuleElement = padded.iter().map(|e| ring.mul_reduced(&m, e)).collect::<Result<_>>()?;
                    known = known.sum(k, &Lattice::span(k, fd.dim(), [fd.coordinates(ring, &x)?]));
                }
            }
            for row in syz.basis() {
                if known.contains(k, row) {
                    continue;
                }
                let x = fd.element(row);
                for m in ring.reduced_monomials(0) {
                    let m = RingElement::monomial(m, Scalar::one());
                    let y: ModuleElement = x.iter().map(|e| ring.mul_reduced(&m, e)).collect::<Result<_>>()?;
                    known = known.sum(k, &Lattice::span(k, fd.dim(), [fd.coordinates(ring, &y)?]));
                }
                relations.push(x);
                relation_degrees.push(d);
            }
        }
        let n = gens.len();
        for r in relations.iter_mut() {
            r.resize(n, RingElement::zero());
        }
        let module = ModulePresentation::with_shifts(ring, gens.iter().map(|g| g.1).collect(), relations)?;
        let inclusion = ModuleMap {
            source: module.clone(),
            target: self.source.clone(),
            degree: 0,
            images: gens.into_iter().map(|g| g.0).collect(),
        };
        Ok(KernelReport { module, inclusion, window })
    }
}

/// Greedy homogeneous generators of the submodule whose degree-`d` part is
/// `lattice(d)` (a lattice of free coordinates containing the relations).
pub(crate) fn choose_generators<F>(
    ambient: &ModulePresentation,
    window: (i64, i64),
    ideal0: &[RingElement],
    mut lattice: F,
) -> Result<Vec<(ModuleElement, i64)>>
where
    F: FnMut(i64) -> Result<Lattice>,
{
    let ring = ambient.ring();
    let k = ring.ground();
    let mut gens: Vec<(ModuleElement, i64)> = Vec::new();
    for d in window.0..=window.1 {
        let data = ambient.degree_data(d)?;
        let target = lattice(d)?;
        let mut span = generated_span(ambient, &gens, d)?;
        if !ideal0.is_empty() {
            let mut extra = Vec::new();
            for row in target.basis() {
                let x = data.element(row);
                for a in ideal0 {
                    let y: ModuleElement = x.iter().map(|c| ring.mul_reduced(a, c)).collect::<Result<_>>()?;
                    extra.push(data.coordinates(ring, &y)?);
                }
            }
            span = span.sum(k, &Lattice::span(k, data.dim(), extra));
        }
        for row in target.basis() {
            if span.contains(k, row) {
                continue;
            }
            let new = vec![(data.element(row), d)];
            span = span.sum(k, &generated_span(ambient, &new, d)?);
            gens.extend(new);
        }
    }
    Ok(gens)
}

/// Relations plus all monomial multiples of `gens` in degree `d`.
pub(crate) fn generated_span(ambient: &ModulePresentation, gens: &[(ModuleElement, i64)], d: i64) -> Result<Lattice> {
    let ring = ambient.ring();
    let k = ring.ground();
    let data = ambient.degree_data(d)?;
    let mut vectors: Vec<Vec<Scalar>> = data.relations.basis().to_vec();
    for (x, e) in gens {
        for m in ring.reduced_monomials(d - e) {
            let m = RingElement::monomial(m, Scalar::one());
            let y: ModuleElement = x.iter().map(|c| ring.mul_reduced(&m, c)).collect::<Result<_>>()?;
            vectors.push(data.coordinates(ring, &y)?);
        }
    }
    Ok(Lattice::span(k, data.dim(), vectors))
}
