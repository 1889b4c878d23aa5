#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "cuspforge/common.hpp"

namespace cuspforge {

// Planar map given by a rotation system.  Edge e owns darts 2e and 2e+1
// (dart ^ 1 is the reversal); rotations list outgoing darts per vertex in
// counterclockwise order.  Face tracing follows the convention: the dart
// after d in its face is the rotation successor of the reversed dart.  With
// counterclockwise rotations this traces each face with its interior on the
// right of every dart; layout code relies on that.
class PlanarMap {
  public:
    PlanarMap() = default;
    explicit PlanarMap(int n_vertices) : rotations_(n_vertices) {}

    int vertex_count() const { return static_cast<int>(rotations_.size()); }
    int edge_count() const { return static_cast<int>(edge_ends_.size()); }
    int dart_count() const { return 2 * edge_count(); }

    int add_vertex() {
        rotations_.emplace_back();
        return vertex_count() - 1;
    }

    // Adds edge {u, v}; darts to rotations must be appended by the caller
    // (or use the rotation helpers below).  Returns the edge id.
    int add_edge(int u, int v) {
        edge_ends_.push_back({u, v});
        dirty_ = true;
        return edge_count() - 1;
    }

    int tail(int dart) const { return (dart & 1) ? edge_ends_[dart >> 1][1] : edge_ends_[dart >> 1][0]; }
    int head(int dart) const { return tail(dart ^ 1); }
    int edge_of(int dart) const { return dart >> 1; }
    static int dart_of(int edge, int side) { return 2 * edge + side; }

    const std::array<int, 2>& ends(int edge) const { return edge_ends_[edge]; }

    std::vector<int>& rotation(int v) {
        dirty_ = true;
        return rotations_[v];
    }
    const std::vector<int>& rotation(int v) const { return rotations_[v]; }

    void append_to_rotation(int v, int dart) {
        rotations_[v].push_back(dart);
        dirty_ = true;
    }

    int degree(int v) const { return static_cast<int>(rotations_[v].size()); }

    // Next dart of the face containing `dart`.
    int next_in_face(int dart) const {
        require_index();
        int r = dart ^ 1;
        int v = tail(r);
        const auto& rot = rotations_[v];
        int pos = rot_pos_[r];
        return rot[(pos + 1) % rot.size()];
    }

    struct Faces {
        std::vector<std::vector<int>> cycles;  // dart cycles, one per face
        std::vector<int> face_of_dart;         // dart -> face index
        int count() const { return static_cast<int>(cycles.size()); }
    };

    const Faces& faces() const {
        require_index();
        if (faces_stale_) {
            faces_.cycles.clear();
            faces_.face_of_dart.assign(dart_count(), -1);
            for (int d0 = 0; d0 < dart_count(); ++d0) {
                if (faces_.face_of_dart[d0] >= 0) continue;
                std::vector<int> cycle;
                int d = d0;
                do {
                    faces_.face_of_dart[d] = faces_.count();
                    cycle.push_back(d);
                    d = next_in_face(d);
                } while (d != d0);
                faces_.cycles.push_back(std::move(cycle));
            }
            faces_stale_ = false;
        }
        return faces_;
    }

    int euler_characteristic() const {
        return vertex_count() - edge_count() + faces().count();
    }

    bool is_sphere_map() const { return euler_characteristic() == 2; }

    // Checks the rotation system is well formed: every dart appears exactly
    // once, at its tail vertex.
    bool well_formed() const {
        std::vector<int> seen(dart_count(), 0);
        for (int v = 0; v < vertex_count(); ++v) {
            for (int d : rotations_[v]) {
                if (d < 0 || d >= dart_count()) return false;
                if (tail(d) != v) return false;
                if (seen[d]++) return false;
            }
        }
        for (int s : seen)
            if (s != 1) return false;
        return true;
    }

    // Dual map: one vertex per face; edge ids are shared with the primal and
    // dart d of the dual runs from the face containing the primal dart d.
    // Rotations of a dual vertex are the face cycle darts in trace order.
    PlanarMap dual() const {
        const Faces& f = faces();
        PlanarMap d(f.count());
        d.edge_ends_.resize(edge_count());
        for (int e = 0; e < edge_count(); ++e) {
            d.edge_ends_[e] = {f.face_of_dart[2 * e], f.face_of_dart[2 * e + 1]};
        }
        for (int i = 0; i < f.count(); ++i) d.rotations_[i] = f.cycles[i];
        d.dirty_ = true;
        return d;
    }

    // Stellar subdivision: insert a new vertex inside face `face` and join it
    // to the three (or k) face corners.  Keeps the map a triangulation when
    // the face is a triangle.
    int insert_vertex_in_face(int face) {
        const auto cycle = faces().cycles[face];  // copy; we mutate below
        int x = add_vertex();
        std::vector<int> rot_x;
        for (int dart : cycle) {
            int v = head(dart);
            int e = add_edge(v, x);
            // Insert dart v->x right after the reversed face dart in rot(v),
            // i.e. between v->u and v->w, inside the old face corner.
            auto& rot = rotations_[v];
            auto it = std::find(rot.begin(), rot.end(), dart ^ 1);
            rot.insert(std::next(it), dart_of(e, 0));
            rot_x.push_back(dart_of(e, 1));
        }
        // Seen from x, the corners appear in reversed face-trace order.
        std::reverse(rot_x.begin(), rot_x.end());
        rotations_[x] = std::move(rot_x);
        dirty_ = true;
        return x;
    }

    // Flip the diagonal of the two triangles adjacent to `edge`.  The caller
    // is responsible for legality (distinct opposite vertices, degrees stay
    // at least 3, no doubled edge created).
    void flip_edge(int edge) {
        int dab = dart_of(edge, 0), dba = dart_of(edge, 1);
        int a = tail(dab), b = tail(dba);
        // Face 1: a->b, b->c, c->a.  Face 2: b->a, a->d, d->b.
        int dbc = next_in_face(dab);
        int dad = next_in_face(dba);
        int c = head(dbc), d = head(dad);

        auto erase_dart = [&](int v, int dart) {
            auto& rot = rotations_[v];
            rot.erase(std::find(rot.begin(), rot.end(), dart));
        };
        auto insert_after = [&](int v, int after, int dart) {
            auto& rot = rotations_[v];
            auto it = std::find(rot.begin(), rot.end(), after);
            rot.insert(std::next(it), dart);
        };
        erase_dart(a, dab);
        erase_dart(b, dba);
        edge_ends_[edge] = {c, d};
        insert_after(c, dbc ^ 1, dart_of(edge, 0));  // c->d after c->b
        insert_after(d, dad ^ 1, dart_of(edge, 1));  // d->c after d->a
        dirty_ = true;
    }

    bool has_edge(int u, int v) const {
        for (const auto& e : edge_ends_) {
            if ((e[0] == u && e[1] == v) || (e[0] == v && e[1] == u)) return true;
        }
        return false;
    }

  private:
    void require_index() const {
        if (!dirty_) return;
        rot_pos_.assign(dart_count(), -1);
        for (int v = 0; v < vertex_count(); ++v) {
            const auto& rot = rotations_[v];
            for (std::size_t i = 0; i < rot.size(); ++i) rot_pos_[rot[i]] = static_cast<int>(i);
        }
        dirty_ = false;
        faces_stale_ = true;
    }

    std::vector<std::array<int, 2>> edge_ends_;
    std::vector<std::vector<int>> rotations_;

    mutable bool dirty_ = true;
    mutable bool faces_stale_ = true;
    mutable std::vector<int> rot_pos_;
    mutable Faces faces_;
};

}  // namespace cuspforge
