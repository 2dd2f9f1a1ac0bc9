//! Chromosome encoding and the layout decoder.
//!
//! A candidate solution is a vector of `3n` genes in `[0, 1]`:
//!
//! * genes `[0, n)` are insertion-order keys (lower key places earlier),
//! * genes `[n, 2n)` map to a rotation via `⌊4x⌋ · 90°`,
//! * genes `[2n, 3n)` map to a shift direction via `θ · 360°`.
//!
//! Decoding places cells one at a time: each cell starts at the origin and,
//! if it overlaps anything already placed, is pushed outward along its shift
//! ray until it first fits. The march step is coarse; a bisection between the
//! last overlapping and first fitting displacement tightens the placement to
//! near contact.

use crate::instance::Instance;
use crate::layout::{overlaps, DoorSide, Layout, Placement, RectangleSpec};

/// Genes in `[0,1]`, laid out as order keys | rotation genes | shift genes.
#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub genes: Vec<f64>,
}

impl Chromosome {
    pub fn new(genes: Vec<f64>) -> Self {
        debug_assert!(genes.len() % 3 == 0);
        Chromosome { genes }
    }

    pub fn cell_count(&self) -> usize {
        self.genes.len() / 3
    }

    pub fn order_keys(&self) -> &[f64] {
        &self.genes[..self.cell_count()]
    }

    pub fn rotation_genes(&self) -> &[f64] {
        let n = self.cell_count();
        &self.genes[n..2 * n]
    }

    pub fn shift_genes(&self) -> &[f64] {
        let n = self.cell_count();
        &self.genes[2 * n..]
    }
}

/// Step sizes for the outward shift search.
#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    /// Coarse march step along the ray, in length units.
    pub march_step: f64,
    /// Bisection resolution, in length units.
    pub refine_tol: f64,
}

impl StepControl {
    /// March at a quarter of the smallest cell dimension, refine to
    /// `1e-6` of the instance scale.
    pub fn for_instance(instance: &Instance) -> Self {
        let min_dim = instance
            .specs
            .iter()
            .map(|c| c.s.min(c.t))
            .fold(f64::INFINITY, f64::min);
        let min_dim = if min_dim.is_finite() { min_dim } else { 1.0 };
        StepControl {
            march_step: 0.25 * min_dim,
            refine_tol: 1e-6 * instance.scale(),
        }
    }
}

/// Cell indices sorted ascending by key; ties break by cell index.
pub fn decode_order(keys: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].partial_cmp(&keys[b]).unwrap().then(a.cmp(&b)));
    order
}

/// Rotation gene to door side: `⌊4x⌋` quarter turns counterclockwise, with
/// `x = 1` clamped to the last bin.
pub fn decode_rotation(x: f64) -> DoorSide {
    let clamped = x.clamp(0.0, 1.0);
    let turns = ((4.0 * clamped) as usize).min(3);
    DoorSide::from_quarter_turns(turns)
}

/// Shift gene to direction angle in degrees, counterclockwise from +x.
pub fn decode_shift_angle(theta: f64) -> f64 {
    theta.clamp(0.0, 1.0) * 360.0
}

fn feasible_at(
    spec: &RectangleSpec,
    side: DoorSide,
    center: (f64, f64),
    placed_specs: &[RectangleSpec],
    placed: &[Placement],
    tol: f64,
) -> bool {
    let candidate = Placement::new(center.0, center.1, side);
    placed_specs
        .iter()
        .zip(placed.iter())
        .all(|(ps, pp)| !overlaps(spec, &candidate, ps, pp, tol))
}

/// Push a cell from the origin along `direction_deg` until it no longer
/// overlaps any already placed cell, then bisect back to near contact. The
/// first cell (nothing placed) lands exactly at the origin.
pub fn place_by_shifting(
    spec: &RectangleSpec,
    side: DoorSide,
    direction_deg: f64,
    placed_specs: &[RectangleSpec],
    placed: &[Placement],
    tol: f64,
    step_ctrl: &StepControl,
) -> Placement {
    let theta = direction_deg.to_radians();
    let (ux, uy) = (theta.cos(), theta.sin());
    let at = |d: f64| (d * ux, d * uy);

    if feasible_at(spec, side, (0.0, 0.0), placed_specs, placed, tol) {
        return Placement::new(0.0, 0.0, side);
    }

    // Coarse march until the cell first fits.
    let mut lo = 0.0f64;
    let mut hi = step_ctrl.march_step;
    while !feasible_at(spec, side, at(hi), placed_specs, placed, tol) {
        lo = hi;
        hi += step_ctrl.march_step;
    }

    // Bisect between last overlapping and first fitting displacement.
    while hi - lo > step_ctrl.refine_tol {
        let mid = 0.5 * (lo + hi);
        if feasible_at(spec, side, at(mid), placed_specs, placed, tol) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let (x, y) = at(hi);
    Placement::new(x, y, side)
}

/// Decode a chromosome into a feasible layout for `instance`. Genes are
/// clamped to `[0,1]` first, so the decoder is total over anything the
/// variation operators produce.
pub fn decode(chromosome: &Chromosome, instance: &Instance) -> Layout {
    let n = instance.len();
    debug_assert_eq!(chromosome.cell_count(), n);
    let tol = instance.overlap_tol();
    let step_ctrl = StepControl::for_instance(instance);

    let order = decode_order(chromosome.order_keys());
    let rotations: Vec<DoorSide> = chromosome
        .rotation_genes()
        .iter()
        .map(|&x| decode_rotation(x))
        .collect();
    let shifts: Vec<f64> = chromosome
        .shift_genes()
        .iter()
        .map(|&x| decode_shift_angle(x))
        .collect();

    let mut placed_specs: Vec<RectangleSpec> = Vec::with_capacity(n);
    let mut placed: Vec<Placement> = Vec::with_capacity(n);
    let mut placements: Vec<Option<Placement>> = vec![None; n];

    for &cell in &order {
        let spec = instance.specs[cell];
        let placement = place_by_shifting(
            &spec,
            rotations[cell],
            shifts[cell],
            &placed_specs,
            &placed,
            tol,
            &step_ctrl,
        );
        placed_specs.push(spec);
        placed.push(placement);
        placements[cell] = Some(placement);
    }

    Layout::new(
        instance.specs.clone(),
        placements.into_iter().map(|p| p.unwrap()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance;
    use crate::layout::layout_is_feasible;
    use proptest::prelude::*;

    fn two_squares() -> Instance {
        Instance::from_parts(
            "two-squares",
            vec![RectangleSpec::new(0, 2.0, 2.0), RectangleSpec::new(1, 2.0, 2.0)],
            vec![vec![0.0, 0.0], vec![0.0, 0.0]],
        )
        .unwrap()
    }

    #[test]
    fn order_is_stable_ascending() {
        assert_eq!(decode_order(&[0.7, 0.2, 0.5]), vec![1, 2, 0]);
        assert_eq!(decode_order(&[0.5, 0.5]), vec![0, 1]);
        assert_eq!(decode_order(&[0.0, 1.0, 0.99]), vec![0, 2, 1]);
    }

    #[test]
    fn rotation_bins() {
        assert_eq!(decode_rotation(0.1), DoorSide::Below);
        assert_eq!(decode_rotation(0.3), DoorSide::Right);
        assert_eq!(decode_rotation(0.6), DoorSide::Above);
        assert_eq!(decode_rotation(0.8), DoorSide::Left);
        assert_eq!(decode_rotation(1.0), DoorSide::Left);
    }

    #[test]
    fn shift_angle_scaling() {
        assert_eq!(decode_shift_angle(0.25), 90.0);
        assert_eq!(decode_shift_angle(0.0), 0.0);
        assert_eq!(decode_shift_angle(0.5), 180.0);
    }

    #[test]
    fn first_cell_lands_at_origin() {
        let inst = two_squares();
        let ctrl = StepControl::for_instance(&inst);
        let p = place_by_shifting(
            &inst.specs[0],
            DoorSide::Below,
            123.0,
            &[],
            &[],
            inst.overlap_tol(),
            &ctrl,
        );
        assert_eq!((p.center_x, p.center_y), (0.0, 0.0));
    }

    #[test]
    fn second_cell_shifts_to_contact() {
        let inst = two_squares();
        let ctrl = StepControl::for_instance(&inst);
        let first = Placement::new(0.0, 0.0, DoorSide::Below);
        let tol = inst.overlap_tol();

        let along_x = place_by_shifting(
            &inst.specs[1],
            DoorSide::Below,
            0.0,
            &inst.specs[..1],
            &[first],
            tol,
            &ctrl,
        );
        assert!((along_x.center_x - 2.0).abs() < 1e-4, "{:?}", along_x);
        assert!(along_x.center_y.abs() < 1e-9);

        let along_y = place_by_shifting(
            &inst.specs[1],
            DoorSide::Below,
            90.0,
            &inst.specs[..1],
            &[first],
            tol,
            &ctrl,
        );
        assert!((along_y.center_y - 2.0).abs() < 1e-4, "{:?}", along_y);
        assert!(along_y.center_x.abs() < 1e-7);
    }

    #[test]
    fn decode_two_cells_in_a_row() {
        let inst = two_squares();
        let chr = Chromosome::new(vec![0.1, 0.9, 0.0, 0.0, 0.0, 0.0]);
        let layout = decode(&chr, &inst);
        assert!((layout.placements[0].center_x).abs() < 1e-9);
        assert!((layout.placements[1].center_x - 2.0).abs() < 1e-4);
        assert!(layout_is_feasible(&layout, inst.overlap_tol()));
    }

    #[test]
    fn single_cell_decodes_to_origin() {
        let inst = Instance::from_parts(
            "one",
            vec![RectangleSpec::new(0, 3.0, 1.0)],
            vec![vec![0.0]],
        )
        .unwrap();
        let layout = decode(&Chromosome::new(vec![0.42, 0.77, 0.13]), &inst);
        assert_eq!(layout.placements[0].center_x, 0.0);
        assert_eq!(layout.placements[0].center_y, 0.0);
    }

    #[test]
    fn decode_is_deterministic() {
        let inst = Instance::generate(6, 21, (1.0, 5.0), 0.5, (1.0, 10.0));
        let chr = Chromosome::new((0..18).map(|i| (i as f64 * 0.37) % 1.0).collect());
        let a = decode(&chr, &inst);
        let b = decode(&chr, &inst);
        assert_eq!(a, b);
    }

    #[test]
    fn contact_tightness_along_ray() {
        // Shrinking the returned displacement by 2x the refine tolerance must
        // re-create an overlap whenever the cell had to move at all.
        let inst = Instance::generate(5, 3, (1.0, 4.0), 0.5, (1.0, 5.0));
        let ctrl = StepControl::for_instance(&inst);
        let tol = inst.overlap_tol();
        let chr = Chromosome::new((0..15).map(|i| ((i * 7 + 3) as f64 * 0.173) % 1.0).collect());
        let order = decode_order(chr.order_keys());

        let mut placed_specs = Vec::new();
        let mut placed = Vec::new();
        for &cell in &order {
            let spec = inst.specs[cell];
            let side = decode_rotation(chr.rotation_genes()[cell]);
            let dir = decode_shift_angle(chr.shift_genes()[cell]);
            let p = place_by_shifting(&spec, side, dir, &placed_specs, &placed, tol, &ctrl);
            let displacement = (p.center_x * p.center_x + p.center_y * p.center_y).sqrt();
            if displacement > 0.0 {
                let shrink = (displacement - 2.0 * ctrl.refine_tol) / displacement;
                let tighter = (p.center_x * shrink, p.center_y * shrink);
                assert!(
                    !feasible_at(&spec, side, tighter, &placed_specs, &placed, tol),
                    "placement not tight for cell {cell}"
                );
            }
            placed_specs.push(spec);
            placed.push(p);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn decode_always_feasible(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(1..7usize);
            let inst = Instance::generate(n, seed, (0.5, 6.0), 0.7, (1.0, 10.0));
            let genes: Vec<f64> = (0..3 * n).map(|_| rng.gen::<f64>()).collect();
            let layout = decode(&Chromosome::new(genes), &inst);
            prop_assert!(layout_is_feasible(&layout, inst.overlap_tol()));
        }

        #[test]
        fn relabeling_cells_relabels_layout(seed in 0u64..200) {
            use rand::{seq::SliceRandom, Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(2..6usize);
            let inst = Instance::generate(n, seed.wrapping_add(1), (0.5, 5.0), 0.5, (1.0, 5.0));
            let genes: Vec<f64> = (0..3 * n).map(|_| rng.gen::<f64>()).collect();

            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);

            // Relabel cell i -> perm[i] in both the instance and the genes.
            let mut new_specs = vec![inst.specs[0]; n];
            let mut new_genes = vec![0.0; 3 * n];
            for i in 0..n {
                let j = perm[i];
                new_specs[j] = RectangleSpec::new(j, inst.specs[i].s, inst.specs[i].t);
                new_genes[j] = genes[i];
                new_genes[n + j] = genes[n + i];
                new_genes[2 * n + j] = genes[2 * n + i];
            }
            let relabeled = Instance::from_parts("relabeled", new_specs, vec![vec![0.0; n]; n]).unwrap();
            let base = Instance::from_parts("base", inst.specs.clone(), vec![vec![0.0; n]; n]).unwrap();

            let layout_a = decode(&Chromosome::new(genes), &base);
            let layout_b = decode(&Chromosome::new(new_genes), &relabeled);
            for i in 0..n {
                prop_assert_eq!(layout_a.placements[i], layout_b.placements[perm[i]]);
            }
        }
    }
}
