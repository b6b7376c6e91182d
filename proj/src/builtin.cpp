#include "smse/builtin.hpp"

#include <initializer_list>
#include <utility>

#include "smse/errors.hpp"

namespace smse {

namespace {

struct Row {
  std::initializer_list<const char*> lists;
  Count count;
};

CaptureDataset make(std::vector<std::string> labels, std::initializer_list<Row> rows) {
  std::vector<Cell> cells;
  for (const auto& r : rows) {
    std::uint32_t bits = 0;
    for (const char* l : r.lists) {
      int idx = -1;
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == l) idx = static_cast<int>(i);
      if (idx < 0) throw DataError(std::string("builtin fixture references unknown list ") + l);
      bits |= 1u << idx;
    }
    cells.push_back({CaptureHistory{bits}, r.count});
  }
  return CaptureDataset(std::move(labels), cells);
}

CaptureDataset artificial3() {
  return make({"A", "B", "C"}, {
      {{"A"}, 40}, {{"B"}, 30}, {{"C"}, 20}, {{"A", "B"}, 6},
  });
}

CaptureDataset uk() {
  return make({"LA", "NG", "PF", "GO", "GP", "NCA"}, {
      {{"LA"}, 54}, {{"NG"}, 463}, {{"PF"}, 907}, {{"GO"}, 695}, {{"GP"}, 316}, {{"NCA"}, 57},
      {{"LA", "NG"}, 15}, {{"LA", "PF"}, 19}, {{"LA", "GO"}, 3}, {{"NG", "PF"}, 56},
      {{"NG", "GO"}, 19}, {{"NG", "GP"}, 1}, {{"NG", "NCA"}, 3}, {{"PF", "GO"}, 69},
      {{"PF", "GP"}, 10}, {{"PF", "NCA"}, 31}, {{"GO", "GP"}, 8}, {{"GO", "NCA"}, 6},
      {{"GP", "NCA"}, 1},
      {{"LA", "NG", "PF"}, 1}, {{"LA", "NG", "GO"}, 1}, {{"NG", "PF", "GO"}, 4},
      {{"NG", "PF", "NCA"}, 3}, {{"PF", "GO", "NCA"}, 1},
      {{"LA", "NG", "PF", "GO"}, 1},
  });
}

CaptureDataset netherlands() {
  return make({"I", "K", "O", "P", "R", "Z"}, {
      {{"I"}, 352}, {{"K"}, 1299}, {{"O"}, 403}, {{"P"}, 4466}, {{"R"}, 650}, {{"Z"}, 632},
      {{"I", "O"}, 1}, {{"I", "P"}, 18}, {{"I", "R"}, 3}, {{"I", "Z"}, 16}, {{"K", "O"}, 1},
      {{"K", "P"}, 44}, {{"K", "Z"}, 4}, {{"O", "P"}, 59}, {{"O", "R"}, 2}, {{"O", "Z"}, 57},
      {{"P", "R"}, 82}, {{"P", "Z"}, 125}, {{"R", "Z"}, 2},
      {{"I", "O", "P"}, 4}, {{"I", "P", "Z"}, 4}, {{"O", "P", "R"}, 2}, {{"O", "P", "Z"}, 7},
      {{"P", "R", "Z"}, 1},
  });
}

CaptureDataset new_orleans() {
  return make({"A", "B", "C", "D", "E", "F", "G", "H"}, {
      {{"A"}, 25}, {{"B"}, 5}, {{"C"}, 70}, {{"D"}, 33}, {{"E"}, 6}, {{"F"}, 6}, {{"G"}, 6},
      {{"H"}, 21},
      {{"A", "C"}, 1}, {{"A", "D"}, 2}, {{"A", "E"}, 1}, {{"B", "F"}, 1}, {{"C", "D"}, 1},
      {{"C", "E"}, 1}, {{"C", "G"}, 1}, {{"D", "E"}, 2}, {{"E", "H"}, 1},
      {{"A", "C", "G"}, 1}, {{"A", "D", "E"}, 1},
  });
}

CaptureDataset western() {
  return make({"A", "B", "C", "D", "E"}, {
      {{"A"}, 52}, {{"B"}, 90}, {{"C"}, 114}, {{"D"}, 45}, {{"E"}, 21},
      {{"A", "C"}, 4}, {{"A", "D"}, 2}, {{"A", "E"}, 5}, {{"B", "C"}, 6}, {{"B", "D"}, 1},
      {{"D", "E"}, 3},
      {{"A", "C", "E"}, 1}, {{"B", "C", "D"}, 1},
  });
}

}  // namespace

std::vector<std::string> builtin_dataset_names() {
  return {"uk", "uk5", "netherlands", "netherlands5", "new_orleans", "new_orleans5", "western", "artificial3"};
}

CaptureDataset builtin_dataset(std::string_view name) {
  if (name == "artificial3") return artificial3();
  if (name == "uk") return uk();
  // PF and NCA combined.
  if (name == "uk5") return merge_lists(uk(), {2, 5}, "PF+NCA");
  if (name == "netherlands") return netherlands();
  // The two smallest lists, I and O.
  if (name == "netherlands5") return merge_lists(netherlands(), {0, 2}, "I+O");
  if (name == "new_orleans") return new_orleans();
  // The four smallest lists: B (6), F (7), G (8), E (12).
  if (name == "new_orleans5") return merge_lists(new_orleans(), {1, 4, 5, 6}, "B+E+F+G");
  if (name == "western") return western();
  throw DataError("unknown builtin dataset '" + std::string(name) + "'");
}

}  // namespace smse
