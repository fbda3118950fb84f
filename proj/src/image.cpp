#include "dot/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace dot {

namespace {

double percentile(std::vector<double> v, double pct) {
    const double pos = pct / 100.0 * (v.size() - 1);
    const size_t k = static_cast<size_t>(pos);
    std::nth_element(v.begin(), v.begin() + k, v.end());
    return v[k];
}

}  // namespace

void export_image(const Eigen::VectorXd& field, const TriMesh& mesh,
                  const std::string& path, double clip_lo_pct, double clip_hi_pct,
                  int pixels) {
    if (field.size() != mesh.n())
        throw std::invalid_argument("export_image: field length does not match mesh");

    Eigen::Vector2d lo = mesh.nodes[0], hi = mesh.nodes[0];
    for (const auto& p : mesh.nodes) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }

    std::vector<double> vals(field.data(), field.data() + field.size());
    const double vmin = *std::min_element(vals.begin(), vals.end());
    const double vmax = *std::max_element(vals.begin(), vals.end());
    double clo = percentile(vals, clip_lo_pct);
    double chi = percentile(vals, clip_hi_pct);
    if (!(chi > clo)) {  // flat field
        clo = vmin;
        chi = vmin + 1.0;
    }

    // nearest node per pixel via element containment; outside pixels stay 0
    std::vector<unsigned char> img(pixels * pixels, 0);
#pragma omp parallel for schedule(static)
    for (int py = 0; py < pixels; ++py) {
        for (int px = 0; px < pixels; ++px) {
            const Eigen::Vector2d p(lo.x() + (px + 0.5) / pixels * (hi.x() - lo.x()),
                                    hi.y() - (py + 0.5) / pixels * (hi.y() - lo.y()));
            int nearest = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int e = 0; e < mesh.element_count(); ++e) {
                const auto& t = mesh.elements[e];
                const Eigen::Vector2d &a = mesh.nodes[t[0]], &b = mesh.nodes[t[1]],
                                      &c = mesh.nodes[t[2]];
                const double area2 = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
                const double w0 = ((b - p).x() * (c - p).y() - (b - p).y() * (c - p).x()) / area2;
                const double w1 = ((c - p).x() * (a - p).y() - (c - p).y() * (a - p).x()) / area2;
                const double w2 = 1.0 - w0 - w1;
                if (w0 < -1e-12 || w1 < -1e-12 || w2 < -1e-12) continue;
                for (int v = 0; v < 3; ++v) {
                    const double d = (mesh.nodes[t[v]] - p).squaredNorm();
                    if (d < best) {
                        best = d;
                        nearest = t[v];
                    }
                }
                break;
            }
            if (nearest >= 0) {
                const double v = std::clamp(field[nearest], clo, chi);
                img[py * pixels + px] =
                    static_cast<unsigned char>(std::lround((v - clo) / (chi - clo) * 255.0));
            }
        }
    }

    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("export_image: cannot open " + path);
    std::fprintf(f, "P5\n%d %d\n255\n", pixels, pixels);
    std::fwrite(img.data(), 1, img.size(), f);
    std::fclose(f);

    std::FILE* s = std::fopen((path + ".txt").c_str(), "w");
    if (!s) throw std::runtime_error("export_image: cannot open " + path + ".txt");
    std::fprintf(s, "min %.17g\nmax %.17g\nclip_lo %.17g\nclip_hi %.17g\n", vmin, vmax, clo,
                 chi);
    std::fclose(s);
}

}  // namespace dot
