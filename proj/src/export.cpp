#include <cstdio>
#include <sstream>

#include "quadsim/policy.hpp"

namespace quadsim {

namespace {

std::string float_literal(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9ef", static_cast<double>(static_cast<float>(v)));
  return buf;
}

void emit_array(std::ostringstream& os, const std::string& name, int count,
                const auto& value_at) {
  os << "static const float " << name << "[" << count << "] = {";
  for (int i = 0; i < count; ++i) {
    os << (i % 6 == 0 ? "\n    " : " ") << float_literal(value_at(i)) << ',';
  }
  os << "\n};\n\n";
}

}  // namespace

std::string export_embedded(const PolicyNet& net, const std::string& function_name) {
  const Mlp& mlp = net.mean;
  const auto& sizes = mlp.sizes();
  const int layers = mlp.num_layers();
  int widest = 0;
  for (std::size_t i = 1; i + 1 < sizes.size(); ++i) widest = std::max(widest, sizes[i]);

  std::ostringstream os;
  os << "/* Generated policy network. Layer sizes:";
  for (int s : sizes) os << ' ' << s;
  os << ". Hidden layers use tanh, output is linear. */\n\n";
  os << "#include <math.h>\n\n";

  for (int l = 0; l < layers; ++l) {
    const MatrixXd& w = mlp.weight(l);
    const VectorXd& b = mlp.bias(l);
    emit_array(os, "kW" + std::to_string(l), static_cast<int>(w.size()),
               [&w](int i) { return w(i / w.cols(), i % w.cols()); });
    emit_array(os, "kB" + std::to_string(l), static_cast<int>(b.size()),
               [&b](int i) { return b[i]; });
  }

  os << "static void dense(const float* w, const float* b, const float* in, int n_in,\n"
        "                  float* out, int n_out, int apply_tanh) {\n"
        "  int r, c;\n"
        "  for (r = 0; r < n_out; ++r) {\n"
        "    float acc = b[r];\n"
        "    for (c = 0; c < n_in; ++c) acc += w[r * n_in + c] * in[c];\n"
        "    out[r] = apply_tanh ? tanhf(acc) : acc;\n"
        "  }\n"
        "}\n\n";

  os << "void " << function_name << "(const float in[" << sizes.front() << "], float out["
     << sizes.back() << "]) {\n";
  if (layers > 1) {
    os << "  float a[" << widest << "];\n  float b[" << widest << "];\n";
  }
  std::string src = "in";
  for (int l = 0; l < layers; ++l) {
    const bool last = (l + 1 == layers);
    const std::string dst = last ? "out" : (l % 2 == 0 ? "a" : "b");
    os << "  dense(kW" << l << ", kB" << l << ", " << src << ", " << sizes[l] << ", " << dst
       << ", " << sizes[l + 1] << ", " << (last ? 0 : 1) << ");\n";
    src = dst;
  }
  os << "}\n";
  return os.str();
}

}  // namespace quadsim
