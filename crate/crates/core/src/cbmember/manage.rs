use super::FilterParams;
use crate::rfs::{
    systematic_resample, BernoulliComponent, BernoulliLike, MultiBernoulliDensity, RandomSource,
};

/// Merged existence is capped here.
const MERGED_EXISTENCE_CAP: f64 = 0.999;

/// Track management: drop tracks with `r < prune_threshold`, merge tracks whose
/// position estimates are within `merge_distance` of the strongest track in
/// their neighbourhood, keep at most `max_components` by existence, and
/// resample every survivor to its particle budget.
pub fn prune_merge_resample<B: BernoulliLike>(
    components: &[B],
    params: &FilterParams,
    rng: &mut RandomSource,
) -> MultiBernoulliDensity {
    let mut kept: Vec<usize> = (0..components.len())
        .filter(|&i| components[i].existence() >= params.prune_threshold)
        .collect();
    // Strongest first; ties keep input order.
    kept.sort_by(|&a, &b| {
        components[b]
            .existence()
            .total_cmp(&components[a].existence())
            .then(a.cmp(&b))
    });

    let centers: Vec<[f64; 2]> = kept
        .iter()
        .map(|&i| {
            let m = components[i].eap_mean();
            [m.first().copied().unwrap_or(0.0), m.get(1).copied().unwrap_or(0.0)]
        })
        .collect();

    let merge_sq = params.merge_distance * params.merge_distance;
    let mut assigned = vec![false; kept.len()];
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for lead in 0..kept.len() {
        if assigned[lead] {
            continue;
        }
        let mut members = Vec::new();
        for other in lead..kept.len() {
            if assigned[other] {
                continue;
            }
            let dx = centers[other][0] - centers[lead][0];
            let dy = centers[other][1] - centers[lead][1];
            if dx * dx + dy * dy <= merge_sq {
                assigned[other] = true;
                members.push(kept[other]);
            }
        }
        let r = if members.len() == 1 {
            components[members[0]].existence()
        } else {
            let miss: f64 = members
                .iter()
                .map(|&i| 1.0 - components[i].existence())
                .product();
            (1.0 - miss).min(MERGED_EXISTENCE_CAP)
        };
        groups.push((r.min(params.max_existence), members));
    }

    groups.sort_by(|a, b| b.0.total_cmp(&a.0));
    groups.truncate(params.max_components);

    let mut out = Vec::with_capacity(groups.len());
    for (r, members) in groups {
        let total_r: f64 = members.iter().map(|&i| components[i].existence()).sum();
        let union = members.iter().flat_map(|&i| {
            let scale = components[i].existence() / total_r;
            components[i].weighted_states().map(move |(s, w)| (s, w * scale))
        });
        let n = params.budget.for_existence(r);
        if let Ok(particles) = systematic_resample(union, n, rng) {
            out.push(BernoulliComponent::new(r, particles));
        }
    }
    MultiBernoulliDensity::new(out)
}
