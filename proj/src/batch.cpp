#include "rwdir/batch.hpp"

namespace rwdir {

RandomStream run_stream(std::uint64_t base_seed, std::size_t run) { return RandomStream(base_seed).split(run); }

}  // namespace rwdir
