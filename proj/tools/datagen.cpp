// Generates a covtype-format CSV (54 integer feature columns + class in 1..7)
// for running the pipeline where the real Covtype file is not available. The
// two target classes (3 and 7) get overlapping class-conditional feature
// distributions, so a logistic separator reaches ~80-85% accuracy: learnable
// but far from separable, like the real pair. Output is deterministic in the
// seed, byte for byte.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fogplan/rng.hpp"

using fogplan::Rng;

namespace {

struct QuantSpec {
  double mean3, mean7, mean_other, sd;
  double lo, hi;
};

// ten quantitative columns on covtype-like scales; elevation and the two
// distance columns carry most of the class signal
const QuantSpec kQuant[10] = {
    {2550, 2950, 2750, 220, 1800, 3900},  // elevation
    {155, 155, 155, 110, 0, 360},         // aspect
    {17, 13, 15, 7, 0, 60},               // slope
    {230, 320, 270, 200, 0, 1400},        // horiz dist to hydrology
    {40, 55, 45, 60, -170, 600},          // vert dist to hydrology
    {1800, 2700, 2300, 1400, 0, 7100},    // horiz dist to roadways
    {213, 210, 212, 26, 0, 254},          // hillshade 9am
    {220, 226, 223, 20, 60, 254},         // hillshade noon
    {140, 148, 143, 36, 0, 254},          // hillshade 3pm
    {1700, 2300, 2000, 1300, 0, 7100},    // horiz dist to fire points
};

int draw_quant(Rng& rng, const QuantSpec& q, double mean) {
  const double v = mean + q.sd * rng.normal();
  return static_cast<int>(std::lround(std::clamp(v, q.lo, q.hi)));
}

// categorical draw from cumulative weights
int draw_cat(Rng& rng, const std::vector<double>& weights) {
  double total = 0;
  for (double w : weights) total += w;
  double u = rng.uniform01() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

std::vector<double> soil_weights(int cls) {
  std::vector<double> w(40, 0.1);  // shared background mass
  if (cls == 3) {
    for (int i = 0; i < 12; ++i) w[i] += 2.0;  // low-elevation soils
  } else if (cls == 7) {
    for (int i = 28; i < 40; ++i) w[i] += 2.0;  // alpine soils
  } else {
    for (int i = 10; i < 30; ++i) w[i] += 1.0;
  }
  return w;
}

std::vector<double> wilderness_weights(int cls) {
  if (cls == 3) return {2.5, 1.0, 0.8, 0.2};
  if (cls == 7) return {0.3, 1.0, 2.2, 1.0};
  return {1.0, 1.0, 1.0, 1.0};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covtype-format synthetic dataset generator"};
  std::string out_path = "data/covtype_synth.csv";
  long rows = 50000;
  uint64_t seed = 20240117;
  app.add_option("-o,--out", out_path, "output CSV path");
  app.add_option("-n,--rows", rows, "total rows");
  app.add_option("--seed", seed, "generator seed");
  CLI11_PARSE(app, argc, argv);

  Rng rng(seed);

  // 48% class 3, 42% class 7, 10% filler classes 1/2 to exercise filtering
  std::vector<int> classes;
  classes.reserve(rows);
  for (long i = 0; i < rows; ++i) {
    const double u = rng.uniform01();
    classes.push_back(u < 0.48 ? 3 : (u < 0.90 ? 7 : (u < 0.96 ? 1 : 2)));
  }
  rng.shuffle(classes);

  const std::filesystem::path path(out_path);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return 1;
  }

  std::string line;
  const auto soil3 = soil_weights(3), soil7 = soil_weights(7), soil_other = soil_weights(1);
  const auto wild3 = wilderness_weights(3), wild7 = wilderness_weights(7),
             wild_other = wilderness_weights(1);

  for (long i = 0; i < rows; ++i) {
    const int cls = classes[i];
    line.clear();
    for (const auto& q : kQuant) {
      const double mean = cls == 3 ? q.mean3 : (cls == 7 ? q.mean7 : q.mean_other);
      line += std::to_string(draw_quant(rng, q, mean));
      line += ',';
    }
    const int wi = draw_cat(rng, cls == 3 ? wild3 : (cls == 7 ? wild7 : wild_other));
    for (int j = 0; j < 4; ++j) {
      line += (j == wi ? "1," : "0,");
    }
    const int si = draw_cat(rng, cls == 3 ? soil3 : (cls == 7 ? soil7 : soil_other));
    for (int j = 0; j < 40; ++j) {
      line += (j == si ? "1," : "0,");
    }
    line += std::to_string(cls);
    line += '\n';
    out << line;
  }
  out.close();
  std::cout << "wrote " << rows << " rows to " << out_path << "\n";
  return 0;
}
