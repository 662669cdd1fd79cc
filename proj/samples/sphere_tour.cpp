// Builds a few rotational examples, verifies them and writes an OBJ of the S^2 x R sphere.
//   ./sphere_tour [out.obj]

#include <cstdio>
#include <fstream>

#include "hrsurf/io.hpp"
#include "hrsurf/verify.hpp"

using namespace hrsurf;

int main(int argc, char **argv) {
    struct Job {
        AmbientSpace space;
        int r;
        double hr;
        Scenario scenario;
    };
    const Job jobs[] = {
        {AmbientSpace::hyperbolic(Field::R, 3), 1, 4.0, Scenario::Sphere},
        {AmbientSpace::hyperbolic(Field::R, 3), 1, 4.0, Scenario::Delaunay},
        {AmbientSpace::hyperbolic(Field::C, 2), 2, 1.0, Scenario::EntireGraph},
        {AmbientSpace::sphere(3), 1, 0.5, Scenario::Sphere},
    };
    for (const auto &j : jobs) {
        auto m = construct(j.space, FamilyKind::GeodesicSpheres, j.r, j.hr, j.scenario);
        auto rep = verify_constancy(m);
        std::printf("%-8s r=%d H=%-4g %-30s %-9s residual %.2e  %s\n", j.space.spec().c_str(), j.r, j.hr,
                    classification_name(m.classification), m.convexity ? convexity_name(*m.convexity) : "-", rep.max_hr_residual,
                    rep.passed() ? "ok" : "FAILED");
    }

    auto s2 = construct(AmbientSpace::sphere(2), FamilyKind::GeodesicSpheres, 1, 1.0, Scenario::Sphere);
    auto mesh = revolution_mesh(s2);
    std::printf("S^2 sphere mesh: %zu vertices, %zu triangles, chi = %ld\n", mesh.vertices.size(),
                mesh.triangles.size(), static_cast<long>(euler_characteristic(mesh)));
    if (argc > 1) {
        std::ofstream out(argv[1]);
        write_obj(s2, mesh, out);
    }
    return 0;
}
