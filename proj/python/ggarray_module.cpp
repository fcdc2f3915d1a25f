#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>
#include <vector>

#include "ggarray/baselines.hpp"
#include "ggarray/bench.hpp"
#include "ggarray/bucket_vector.hpp"
#include "ggarray/errors.hpp"
#include "ggarray/insert_index.hpp"
#include "ggarray/memory_model.hpp"
#include "ggarray/sharded_array.hpp"

namespace py = pybind11;

namespace {

using Value = std::uint32_t;
using Shard = ggarray::BucketVector<Value>;
using Growable = ggarray::GrowableArray<Value>;
using Values = py::array_t<Value, py::array::c_style | py::array::forcecast>;

std::span<const Value> as_span(const Values& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

py::array_t<Value> to_numpy(std::vector<Value>&& v) {
  auto* heap = new std::vector<Value>(std::move(v));
  py::capsule owner(heap, [](void* p) { delete static_cast<std::vector<Value>*>(p); });
  return py::array_t<Value>(static_cast<py::ssize_t>(heap->size()), heap->data(), owner);
}

ggarray::Reserver reserver_for(const std::string& algo) {
  return ggarray::Reserver(ggarray::parse_reserve_algo(algo));
}

py::tuple range_tuple(const ggarray::ReservedRange& r) { return py::make_tuple(r.start, r.count); }

template <typename Array>
void bind_baseline(py::class_<Array>& cls) {
  cls.def_property_readonly("size", &Array::size)
      .def_property_readonly("capacity", &Array::capacity)
      .def_property_readonly("copies", &Array::copies)
      .def("__len__", &Array::size)
      .def("resize", &Array::resize, py::arg("min_capacity"))
      .def(
          "insert_batch",
          [](Array& a, const Values& values, const std::string& algo) {
            return range_tuple(a.insert_batch(as_span(values), reserver_for(algo)));
          },
          py::arg("values"), py::arg("algo") = "scan")
      .def("__getitem__", &Array::get)
      .def("__setitem__", &Array::set)
      .def("to_numpy", [](const Array& a) { return to_numpy(a.to_vector()); });
}

std::string bench_csv(const std::vector<ggarray::bench::BenchRecord>& records, bool header) {
  std::ostringstream os;
  ggarray::bench::write_bench_csv(os, records, header);
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sharded growable arrays of doubling buckets";

  py::register_exception<ggarray::CapacityExhausted>(m, "CapacityExhausted", PyExc_MemoryError);
  py::register_exception<ggarray::OutOfBounds>(m, "OutOfBounds", PyExc_IndexError);
  py::register_exception<ggarray::ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<ggarray::ShardErrors>(m, "ShardErrors", PyExc_RuntimeError);

  m.def(
      "locate",
      [](std::size_t i, std::size_t first_bucket) {
        const ggarray::BucketVector<Value> probe(first_bucket);
        const auto loc = probe.locate(i);
        return py::make_tuple(loc.bucket, loc.offset);
      },
      py::arg("index"), py::arg("first_bucket") = ggarray::kDefaultFirstBucket,
      "(bucket, offset) of a local index in a shard");
  m.def(
      "exclusive_scan",
      [](const std::vector<std::size_t>& counts) { return ggarray::exclusive_scan(counts); },
      py::arg("counts"));
  m.def(
      "scan_reserve",
      [](const std::vector<std::size_t>& counts, std::size_t start, std::size_t group_size) {
        ggarray::SizeCounter counter(start);
        ggarray::LanePlan plan{counts, group_size};
        std::vector<py::tuple> out;
        for (const auto& r : ggarray::scan_reserve(plan, counter)) out.push_back(range_tuple(r));
        return py::make_tuple(out, counter.operations());
      },
      py::arg("counts"), py::arg("start") = 0, py::arg("group_size") = ggarray::kDefaultGroupSize,
      "Per-lane ranges and the number of shared-counter operations used");

  py::class_<Shard>(m, "ShardVector")
      .def(py::init<std::size_t>(), py::arg("first_bucket") = ggarray::kDefaultFirstBucket)
      .def_property_readonly("size", &Shard::size)
      .def_property_readonly("capacity", &Shard::capacity)
      .def_property_readonly("first_bucket_size", &Shard::first_bucket_size)
      .def_property_readonly("allocated_buckets", &Shard::allocated_buckets)
      .def("__len__", &Shard::size)
      .def("bucket_size", &Shard::bucket_size)
      .def("is_allocated", &Shard::is_allocated)
      .def("new_bucket",
           [](Shard& s, std::size_t b) {
             return s.new_bucket(b) == ggarray::BucketOutcome::allocated;
           })
      .def("reserve", &Shard::reserve, py::arg("min_capacity"))
      .def(
          "push_back_batch",
          [](Shard& s, const Values& values, const std::string& algo) {
            return range_tuple(s.push_back_batch(as_span(values), reserver_for(algo)));
          },
          py::arg("values"), py::arg("algo") = "scan")
      .def("__getitem__", &Shard::get)
      .def("__setitem__", &Shard::set)
      .def("to_numpy", [](const Shard& s) {
        std::vector<Value> out(s.size());
        s.copy_out(0, out);
        return to_numpy(std::move(out));
      });

  py::class_<Growable>(m, "GrowableArray")
      .def(py::init<std::size_t, std::size_t>(), py::arg("shards") = ggarray::kDefaultShards,
           py::arg("first_bucket") = ggarray::kDefaultFirstBucket)
      .def_static(
          "from_flat",
          [](const Values& values, std::size_t shards, std::size_t first_bucket) {
            return Growable::from_flat(as_span(values), shards, first_bucket);
          },
          py::arg("values"), py::arg("shards") = ggarray::kDefaultShards,
          py::arg("first_bucket") = ggarray::kDefaultFirstBucket)
      .def_property_readonly("size", &Growable::size)
      .def_property_readonly("capacity", &Growable::capacity)
      .def_property_readonly("shard_count", &Growable::shard_count)
      .def_property_readonly("prefix",
                             [](const Growable& a) {
                               auto p = a.prefix();
                               return std::vector<std::size_t>(p.begin(), p.end());
                             })
      .def("__len__", &Growable::size)
      .def("shard_size", [](const Growable& a, std::size_t s) { return a.shard(s).size(); })
      .def("locate_shard",
           [](const Growable& a, std::size_t g) {
             const auto pos = a.locate_shard(g);
             return py::make_tuple(pos.shard, pos.local);
           })
      .def("__getitem__", &Growable::get_global)
      .def("__setitem__", &Growable::set_global)
      .def(
          "insert_parallel",
          [](Growable& a, const std::vector<Values>& batches, const std::string& algo) {
            std::vector<std::span<const Value>> views;
            for (const auto& b : batches) views.push_back(as_span(b));
            a.insert_parallel(views, reserver_for(algo));
          },
          py::arg("batches"), py::arg("algo") = "scan")
      .def("commit", &Growable::commit)
      .def(
          "grow",
          [](Growable& a, std::size_t target) { return a.grow(target); },
          py::arg("target_total_capacity"))
      .def("add", [](Growable& a, Value delta) { a.for_each_shard([delta](Value& v) { v += delta; }); },
           py::arg("delta"), "Adds delta to every committed element, shard by shard")
      .def("flatten", [](const Growable& a) { return to_numpy(a.flatten()); });

  using Static = ggarray::StaticArray<Value>;
  using Doubling = ggarray::DoublingArray<Value>;
  using Chunks = ggarray::ChunkTableArray<Value>;
  py::class_<Static> static_cls(m, "StaticArray");
  static_cls.def(py::init<std::size_t>(), py::arg("capacity"));
  bind_baseline(static_cls);
  py::class_<Doubling> doubling_cls(m, "DoublingArray");
  doubling_cls.def(py::init<std::size_t>(), py::arg("initial_capacity") = 1);
  bind_baseline(doubling_cls);
  py::class_<Chunks> chunk_cls(m, "ChunkTableArray");
  chunk_cls.def(py::init<std::size_t>(), py::arg("chunk_size") = ggarray::kDefaultChunkSize);
  bind_baseline(chunk_cls);

  m.def("normal_quantile", &ggarray::normal_quantile, py::arg("p"));
  m.def(
      "static_requirement",
      [](double mu, double sigma, double failure_prob, std::uint64_t base_size,
         std::size_t element_size) {
        ggarray::MemoryModelParams p;
        p.mu = mu;
        p.sigma = sigma;
        p.failure_prob = failure_prob;
        p.base_size = base_size;
        p.element_size = element_size;
        return ggarray::static_requirement(p);
      },
      py::arg("mu") = 0.0, py::arg("sigma") = 0.0, py::arg("failure_prob") = 0.01,
      py::arg("base_size") = 1'000'000, py::arg("element_size") = 4);
  m.def("ggarray_capacity_for", &ggarray::ggarray_capacity_for, py::arg("demand"),
        py::arg("shards") = ggarray::kDefaultShards,
        py::arg("first_bucket") = ggarray::kDefaultFirstBucket, py::arg("element_size") = 4);
  m.def(
      "memory_model_csv",
      [](double mu, double failure_prob, std::uint64_t base_size, std::size_t samples,
         std::uint64_t seed, std::size_t shards, std::size_t first_bucket, bool header) {
        ggarray::MemoryModelParams p;
        p.mu = mu;
        p.failure_prob = failure_prob;
        p.base_size = base_size;
        p.samples = samples;
        p.seed = seed;
        const auto grid = ggarray::default_sigma_grid();
        std::ostringstream os;
        ggarray::write_memory_csv(os, ggarray::run_model(p, grid, shards, first_bucket), header);
        return os.str();
      },
      py::arg("mu") = 0.0, py::arg("failure_prob") = 0.01, py::arg("base_size") = 1'000'000,
      py::arg("samples") = 100'000, py::arg("seed") = 1,
      py::arg("shards") = ggarray::kDefaultShards,
      py::arg("first_bucket") = ggarray::kDefaultFirstBucket, py::arg("header") = true);

  using ggarray::bench::BenchConfig;
  py::class_<BenchConfig>(m, "BenchConfig")
      .def(py::init<>())
      .def_property(
          "structure", [](const BenchConfig& c) { return std::string(to_string(c.structure)); },
          [](BenchConfig& c, const std::string& s) { c.structure = ggarray::bench::parse_structure(s); })
      .def_property(
          "algo", [](const BenchConfig& c) { return std::string(ggarray::to_string(c.algo)); },
          [](BenchConfig& c, const std::string& s) { c.algo = ggarray::parse_reserve_algo(s); })
      .def_property(
          "rw_mode", [](const BenchConfig& c) { return std::string(to_string(c.rw_mode)); },
          [](BenchConfig& c, const std::string& s) { c.rw_mode = ggarray::bench::parse_rw_mode(s); })
      .def_readwrite("shards", &BenchConfig::shards)
      .def_readwrite("first_bucket", &BenchConfig::first_bucket)
      .def_readwrite("workers", &BenchConfig::workers)
      .def_readwrite("initial_size", &BenchConfig::initial_size)
      .def_readwrite("iterations", &BenchConfig::iterations)
      .def_readwrite("work_passes", &BenchConfig::work_passes)
      .def_readwrite("repetitions", &BenchConfig::repetitions)
      .def_readwrite("seed", &BenchConfig::seed)
      .def_readwrite("multiplier", &BenchConfig::multiplier)
      .def_readwrite("rw_grain", &BenchConfig::rw_grain);

  m.def("bench_insert_algos", [](const BenchConfig& c, bool header) {
    return bench_csv(ggarray::bench::bench_insert_algos(c), header);
  }, py::arg("config"), py::arg("header") = true);
  m.def("bench_shard_sweep",
        [](const BenchConfig& c, const std::vector<std::size_t>& shard_list, bool header) {
          return bench_csv(ggarray::bench::bench_shard_sweep(c, shard_list), header);
        },
        py::arg("config"), py::arg("shard_list"), py::arg("header") = true);
  m.def("bench_grow_insert_rw", [](const BenchConfig& c, bool header) {
    return bench_csv(ggarray::bench::bench_grow_insert_rw(c), header);
  }, py::arg("config"), py::arg("header") = true);
  m.def("bench_two_phase", [](const BenchConfig& c, bool header) {
    return bench_csv(ggarray::bench::bench_two_phase(c), header);
  }, py::arg("config"), py::arg("header") = true);
}
