#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "dot/image.hpp"
#include "dot/phantom.hpp"

using namespace dot;

TEST_CASE("no inclusions gives the constant background") {
    const TriMesh mesh = build_disk_mesh(25.0, 5.0);
    Phantom ph;
    const OpticalField f = rasterize(ph, mesh);
    CHECK(f.mua.minCoeff() == 0.01);
    CHECK(f.mua.maxCoeff() == 0.01);
    CHECK(f.mus.minCoeff() == 1.0);
    CHECK(f.mus.maxCoeff() == 1.0);
}

TEST_CASE("one central disk yields exactly two distinct absorption values") {
    const TriMesh mesh = build_disk_mesh(25.0, 3.0);
    Phantom ph;
    ph.inclusions.push_back({Inclusion::Shape::Disk, {0.0, 0.0}, 6.0, {}, 0.01, 0.0});
    const OpticalField f = rasterize(ph, mesh);
    std::set<double> values(f.mua.data(), f.mua.data() + f.mua.size());
    CHECK(values.size() == 2);
    CHECK(values.count(0.01) == 1);
    CHECK(values.count(0.02) == 1);
}

TEST_CASE("the mixed two-inclusion target stays within its configured bounds") {
    const TriMesh mesh = build_disk_mesh(25.0, 2.0);
    const OpticalField f = rasterize(phantom_two_inclusions(), mesh);
    CHECK(f.mua.minCoeff() == doctest::Approx(0.007));
    CHECK(f.mua.maxCoeff() == doctest::Approx(0.015));
    CHECK(f.mus.minCoeff() == doctest::Approx(0.7));
    CHECK(f.mus.maxCoeff() == doctest::Approx(1.5));
    CHECK(f.positive());
}

TEST_CASE("nonpositive rasterization errors name the offending inclusion") {
    const TriMesh mesh = build_disk_mesh(25.0, 5.0);
    Phantom ph;
    ph.inclusions.push_back({Inclusion::Shape::Disk, {0.0, 0.0}, 6.0, {}, -0.02, 0.0});
    CHECK_THROWS_WITH_AS(rasterize(ph, mesh), doctest::Contains("inclusion 0"),
                         std::invalid_argument);
}

TEST_CASE("polygon inclusions rasterize by point containment") {
    const TriMesh mesh = build_disk_mesh(25.0, 3.0);
    Phantom ph;
    Inclusion inc;
    inc.shape = Inclusion::Shape::Polygon;
    inc.vertices = {{-5, -5}, {5, -5}, {5, 5}, {-5, 5}};
    inc.d_mua = 0.005;
    ph.inclusions.push_back(inc);
    const OpticalField f = rasterize(ph, mesh);
    // center node 0 sits inside the square
    CHECK(f.mua[0] == doctest::Approx(0.015));
    CHECK(f.mua.maxCoeff() == doctest::Approx(0.015));
}

TEST_CASE("relative error: exactness, homogeneity and scale-awareness") {
    const TriMesh mesh = build_disk_mesh(25.0, 3.0);
    const OpticalField t = rasterize(phantom_two_inclusions(), mesh);

    const RelativeError zero = relative_error(t, mesh, t, mesh, mesh);
    CHECK(zero.mua_pct == 0.0);
    CHECK(zero.mus_pct == 0.0);

    OpticalField scaled(t.mua * 1.1, t.mus * 1.1);
    const RelativeError ten = relative_error(t, mesh, scaled, mesh, mesh);
    CHECK(ten.mua_pct == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(ten.mus_pct == doctest::Approx(10.0).epsilon(1e-12));

    for (double c : {0.5, 0.8, 1.3}) {
        OpticalField as_map(t.mua * c, t.mus * c);
        const RelativeError re = relative_error(t, mesh, as_map, mesh, mesh);
        CHECK(re.mua_pct == doctest::Approx(std::abs(c - 1.0) * 100.0).epsilon(1e-12));
    }
}

TEST_CASE("rasterize on separate meshes agrees after interpolation") {
    // sharp edges disagree in a staircase band of width ~h around each
    // inclusion boundary; everything else matches exactly
    const TriMesh fine = build_disk_mesh(25.0, 1.0);
    const TriMesh coarse = build_disk_mesh(25.0, 1.05);
    const OpticalField a = rasterize(phantom_two_inclusions(), fine);
    const OpticalField b = rasterize(phantom_two_inclusions(), coarse);
    const RelativeError re = relative_error(a, fine, b, coarse, fine);
    CHECK(re.mua_pct <= 3.0);
    CHECK(re.mus_pct <= 3.0);
}

TEST_CASE("image export: uniform field, gray levels and no-clip percentiles") {
    const TriMesh mesh = build_disk_mesh(25.0, 2.0);

    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(mesh.n(), 0.42);
    export_image(flat, mesh, "img_flat.pgm");
    {
        std::ifstream side("img_flat.pgm.txt");
        std::string k;
        double vmin, vmax;
        side >> k >> vmin >> k >> vmax;
        CHECK(vmin == vmax);
    }

    const OpticalField f = rasterize(phantom_two_inclusions(), mesh);
    export_image(f.mua, mesh, "img_mua.pgm", 0.0, 100.0);
    {
        std::ifstream img("img_mua.pgm", std::ios::binary);
        std::string magic;
        int w, h, maxv;
        img >> magic >> w >> h >> maxv;
        img.get();
        CHECK(magic == "P5");
        std::vector<unsigned char> px(w * h);
        img.read(reinterpret_cast<char*>(px.data()), px.size());
        std::set<int> grays;
        for (unsigned char v : px) grays.insert(v);
        // three field values; outside-domain pixels share the lowest bin
        CHECK(grays.size() == 3);
        CHECK(grays.count(255) == 1);
    }
    std::remove("img_flat.pgm");
    std::remove("img_flat.pgm.txt");
    std::remove("img_mua.pgm");
    std::remove("img_mua.pgm.txt");
}
