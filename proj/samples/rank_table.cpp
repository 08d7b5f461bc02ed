// Prints the p-rank of SL_2(Z/p^e) for small p^e as a CSV table.

#include <iostream>

#include "ranklab/ranklab.hpp"

int main() {
  using namespace ranklab;
  write_rank_csv_header(std::cout);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (std::uint32_t e = 1; checked_pow(p, e) <= 27; ++e) {
      const auto g = enumerate_group(GroupKind::SL, 2, ModulusContext(p, e));
      write_rank_csv_row(std::cout, RankRow{p, e, 2, p_rank(g).rank, known_rank_bound(GroupKind::SL, 2, p, e)});
    }
  }
}
