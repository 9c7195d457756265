#pragma once

#include "scanplan/bvh.hpp"
#include "scanplan/sensor.hpp"

#include <vector>

namespace scanplan {

struct GroundCandidateParams {
    double grid_spacing = 2.0;     // m, horizontal candidate lattice
    double mount_height = 1.5;     // m, scanner height above the floor
    double clearance_radius = 0.5; // m, keep-out from walls and objects
    // A walkable surface must sit within this band above the scene's lowest
    // geometry; keeps candidates off roofs while tolerating ramps and stairs.
    double max_height_above_ground = 2.0;
};

struct AerialCandidateParams {
    double lattice_spacing = 3.0; // m
    double standoff = 2.0;        // m, minimum clearance from all geometry
    double alt_min = 2.0;         // m above local ground
    double alt_max = 30.0;
};

/// Ground candidates on a horizontal grid over the scene footprint. Each grid
/// node casts a vertical ray; the lowest hit must be an up-facing triangle
/// (normal.z > cos 30 deg) inside the walkable height band. Accepted
/// positions sit mount_height above the hit and pass six axis clearance
/// probes. Ids run in row-major grid order.
std::vector<Viewpoint> generate_ground_candidates(const TriangleMesh& mesh,
                                                  const SpatialIndex& index,
                                                  const GroundCandidateParams& params);

/// Aerial candidates on a 3D lattice over the inflated scene box, keeping
/// positions with clearance >= standoff from all geometry (axis probes plus a
/// sampled nearest-surface check) and altitude within [alt_min, alt_max]
/// above local ground. Empty output is valid.
std::vector<Viewpoint> generate_aerial_candidates(const TriangleMesh& mesh,
                                                  const SpatialIndex& index,
                                                  const AerialCandidateParams& params);

} // namespace scanplan
