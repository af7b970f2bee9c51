// Writes a synthetic stand-in for the WCS inputs: 330 chips on a cylinder in
// CIELab-like coordinates, a nonuniform prior, and three toy languages that
// name chips by hue sector. Used only to exercise the exp1 pipeline.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

int main(int argc, char** argv)
{
    if (argc != 2) {
        std::cerr << "usage: make_synthetic_wcs <dir>\n";
        return 2;
    }
    const std::filesystem::path dir(argv[1]);
    std::filesystem::create_directories(dir);
    std::ofstream chips(dir / "chips.txt"), prior(dir / "prior.txt"), terms(dir / "terms.txt");
    chips << "#cnum\tV\tH\tL*\ta*\tb*\n";
    const double pi = std::acos(-1.0);
    for (int id = 1; id <= 330; ++id) {
        const int row = (id - 1) / 33, col = (id - 1) % 33;
        const double L = 15.0 + 8.0 * row;
        const double angle = 2.0 * pi * col / 33.0;
        chips << id << '\t' << char('A' + row) << '\t' << col << '\t' << L << '\t' << 40.0 * std::cos(angle) << '\t'
              << 40.0 * std::sin(angle) << '\n';
        prior << 1.0 + (col % 5) << '\n';
        for (int lang = 1; lang <= 3; ++lang) {
            const int sectors = lang + 2;
            for (int speaker = 1; speaker <= 2; ++speaker) {
                const int shift = speaker == 2 && row % 3 == 0 ? 1 : 0;
                const int term = (col * sectors / 33 + shift) % sectors;
                terms << lang << '\t' << speaker << '\t' << id << "\tT" << term << '\n';
            }
        }
    }
    return 0;
}
