#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "symport/mesh_gen.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"fixture mesh generator (OFF output)"};
    app.require_subcommand(1);

    std::string out = "mesh.off", ports_out;
    double length = 1.0;
    int refine = 3, nx = 8, ny = 4, n = 4;
    double width = 0.02;

    auto* star = app.add_subcommand("star", "five-basis-function star");
    star->add_option("--out", out);
    star->add_option("--size", length, "half span");

    auto* rim = app.add_subcommand("rim", "rectangular rim 2L x L, width L/10, with port ladder");
    rim->add_option("--out", out);
    rim->add_option("--ports-out", ports_out, "ladder anchor CSV");
    rim->add_option("--length", length, "L in meters");
    rim->add_option("--refine", refine, "cells per ladder step");

    auto* plate = app.add_subcommand("plate", "rectangular plate 2L x L");
    plate->add_option("--out", out);
    plate->add_option("--length", length);
    plate->add_option("--nx", nx);
    plate->add_option("--ny", ny);

    auto* square = app.add_subcommand("square", "crossed-cell square plate");
    square->add_option("--out", out);
    square->add_option("--side", length);
    square->add_option("--n", n);

    auto* strip = app.add_subcommand("strip", "thin feed strip");
    strip->add_option("--out", out);
    strip->add_option("--length", length);
    strip->add_option("--width", width);
    strip->add_option("--n", n);

    CLI11_PARSE(app, argc, argv);

    try {
        if (star->parsed()) {
            symport::save_mesh(symport::make_star_mesh(length), out);
        } else if (rim->parsed()) {
            symport::RimMesh r = symport::make_rim_mesh(length, refine);
            symport::save_mesh(r.mesh, out);
            if (!ports_out.empty()) {
                std::ofstream os(ports_out);
                symport::write_ports_csv(r.ladder, os);
            }
        } else if (plate->parsed()) {
            symport::save_mesh(symport::make_plate_mesh(length, nx, ny), out);
        } else if (square->parsed()) {
            symport::save_mesh(symport::make_square_mesh(length, n), out);
        } else if (strip->parsed()) {
            symport::save_mesh(symport::make_strip_mesh(length, width, n), out);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
