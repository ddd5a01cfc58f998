#include "tilenas/graph.hpp"

#include <sstream>

namespace tilenas {

std::vector<TaskRef> TileTaskGraph::layer_tasks(int layer) const {
  const auto& c = counts[layer - 1];
  std::vector<TaskRef> out;
  out.reserve(tasks_in_layer(layer));
  for (int m = 1; m <= c.rc_tiles; ++m)
    for (int j = 1; j <= c.ifm_tiles; ++j)
      for (int k = 1; k <= c.ofm_tiles; ++k) out.push_back({layer, j, k, m});
  return out;
}

TileTaskGraph build_graph(const ChildNetwork& net, const TilingDesign& design) {
  if (auto issue = validate_network(net))
    throw GraphBuildError("invalid network: " + issue->message);
  if (design.per_layer.size() != net.layers.size())
    throw GraphBuildError("design layer count does not match network");

  const int layers = int(net.layers.size());
  TileTaskGraph g;
  g.net = net;
  g.design = design;
  g.counts.resize(layers);
  for (int i = 0; i < layers; ++i) {
    const auto& l = net.layers[i];
    const auto& t = design.per_layer[i];
    if (t.tm < 1 || t.tn < 1 || t.tr < 1 || t.tc < 1)
      throw GraphBuildError("tiling parameters must be positive");
    if (t.tm > l.out_ch || t.tn > l.in_ch || t.tr > l.rows || t.tc > l.cols)
      throw GraphBuildError("tiling parameters exceed layer dimensions");
    g.counts[i].ifm_tiles = int(ceil_div(l.in_ch, t.tn));
    g.counts[i].ofm_tiles = int(ceil_div(l.out_ch, t.tm));
    g.counts[i].rc_tiles = int(ceil_div(l.rows, t.tr) * ceil_div(l.cols, t.tc));
  }

  g.ratio.resize(layers > 0 ? layers - 1 : 0);
  for (int p = 0; p + 1 < layers; ++p) {
    const auto& prod = design.per_layer[p];
    const auto& cons = design.per_layer[p + 1];
    if (cons.tn % prod.tm != 0) {
      std::ostringstream msg;
      msg << "layer " << p + 2 << " tn=" << cons.tn << " is not an integer multiple of "
          << "layer " << p + 1 << " tm=" << prod.tm
          << "; channel-tile mapping would be fractional";
      throw GraphBuildError(msg.str());
    }
    // spatial grids must line up so tile m means the same region in both layers
    const auto& la = net.layers[p];
    bool rows_match = prod.tr == cons.tr || (prod.tr >= la.rows && cons.tr >= la.rows);
    bool cols_match = prod.tc == cons.tc || (prod.tc >= la.cols && cons.tc >= la.cols);
    if (!rows_match || !cols_match) {
      std::ostringstream msg;
      msg << "spatial tile grids of layers " << p + 1 << " and " << p + 2
          << " differ; aligned row/col tiling is required";
      throw GraphBuildError(msg.str());
    }
    g.ratio[p] = cons.tn / prod.tm;
  }

  for (int p = 0; p + 1 < layers; ++p) {
    const auto& cons = g.counts[p + 1];
    for (int m = 1; m <= cons.rc_tiles; ++m) {
      for (int j = 1; j <= cons.ifm_tiles; ++j) {
        auto [k_lo, k_hi] = g.producer_range(p + 2, j);
        for (int k = k_lo; k <= k_hi; ++k)
          g.intra_edges.push_back({p + 1, k, j, m});
      }
    }
  }
  return g;
}

namespace {

std::string tile_name(const char* kind, int layer, int ch, int m) {
  std::ostringstream s;
  s << "t_" << kind << '_' << layer << '_' << ch << '_' << m;
  return s.str();
}

std::string task_name(const TaskRef& t) {
  std::ostringstream s;
  s << "v_" << t.layer << '_' << t.j << '_' << t.k << '_' << t.m;
  return s.str();
}

}  // namespace

std::string export_dot(const TileTaskGraph& g) {
  std::ostringstream out;
  out << "digraph tile_task_graph {\n";
  out << "  rankdir=LR;\n";
  for (int i = 1; i <= g.num_layers(); ++i) {
    const auto& c = g.counts[i - 1];
    for (int m = 1; m <= c.rc_tiles; ++m)
      for (int j = 1; j <= c.ifm_tiles; ++j)
        out << "  " << tile_name("ifm", i, j, m) << " [shape=box,label=\"T_ifm("
            << i << ',' << j << ',' << m << ")\"];\n";
    for (int m = 1; m <= c.rc_tiles; ++m)
      for (int k = 1; k <= c.ofm_tiles; ++k)
        out << "  " << tile_name("ofm", i, k, m) << " [shape=box,label=\"T_ofm("
            << i << ',' << k << ',' << m << ")\"];\n";
    for (const auto& t : g.layer_tasks(i))
      out << "  " << task_name(t) << " [shape=ellipse,label=\"v(" << t.layer << ','
          << t.j << ',' << t.k << ',' << t.m << ")\"];\n";
  }
  for (int i = 1; i <= g.num_layers(); ++i) {
    for (const auto& t : g.layer_tasks(i)) {
      out << "  " << tile_name("ifm", i, t.j, t.m) << " -> " << task_name(t) << ";\n";
      out << "  " << task_name(t) << " -> " << tile_name("ofm", i, t.k, t.m) << ";\n";
    }
  }
  for (const auto& e : g.intra_edges)
    out << "  " << tile_name("ofm", e.layer, e.k, e.m) << " -> "
        << tile_name("ifm", e.layer + 1, e.j, e.m) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace tilenas
