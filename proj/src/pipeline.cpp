/*
 * Copyright 2026 The mtskit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mtskit/pipeline.hpp"

#include <bit>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mts {

namespace {

bool zeroed_input(TransformKind kind, int n) { return retained_count(kind, n) < n; }

const RomSegment& need_segment(const RomImage& rom, TransformKind kind, int n) {
  const RomSegment* seg = rom.find(kind, n);
  if (!seg) {
    throw DomainError("ROM image lacks the " + std::string(to_string(kind)) + "-" + std::to_string(n) +
                      " segment");
  }
  return *seg;
}

// Split segment, MAC cycle p: rows 2p (lane 0) and 2p+1 (lane 1).
MacStep split_step(const RomImage& rom, const RomSegment& seg, int p) {
  MacStep s;
  const int base = seg.slot_base_of_cycle(p);
  s.word = rom.word_offset(seg.kind, seg.n, seg.column_of_cycle(p));
  s.slot_base = {base, kLaneSlots + base};
  s.len = {seg.row_len, seg.row_len};
  return s;
}

// Wide segment, row r: one sample on both lanes, 32 coefficients.
MacStep wide_step(const RomImage& rom, const RomSegment& seg, int r, int input, int acc) {
  MacStep s;
  s.word = rom.word_offset(seg.kind, seg.n, r);
  s.sel = false;
  s.in = {input, input};
  s.slot_base = {0, kLaneSlots};
  s.len = {kLaneSlots, kLaneSlots};
  s.acc_base = {acc, acc + kLaneSlots};
  return s;
}

// With sel disabled a paired column is read twice, once per lane.
void push_paired(std::vector<MacStep>& out, MacStep s, bool sel, int retained) {
  if (sel) {
    out.push_back(s);
    return;
  }
  for (int lane = 0; lane < 2; ++lane) {
    if (s.in[static_cast<std::size_t>(lane)] >= retained) continue;
    MacStep m = s;
    m.sel = false;
    m.in = {s.in[static_cast<std::size_t>(lane)], s.in[static_cast<std::size_t>(lane)]};
    m.len[static_cast<std::size_t>(1 - lane)] = 0;
    out.push_back(m);
  }
}

char hex_digit(unsigned v) { return "0123456789abcdef"[v & 0xf]; }

std::string bus_hex(const std::array<std::int16_t, 2>& v) {
  const std::uint32_t w = (static_cast<std::uint32_t>(static_cast<std::uint16_t>(v[1])) << 16) |
                          static_cast<std::uint16_t>(v[0]);
  std::string s(8, '0');
  for (int i = 0; i < 8; ++i) s[static_cast<std::size_t>(7 - i)] = hex_digit(w >> (4 * i));
  return s;
}

}  // namespace

int block_cycles(int n) {
  require_valid_order(TransformKind::DCT2, n);
  return n * n / 2;
}

int tr_size_code(int n) {
  require_valid_order(TransformKind::DCT2, n);
  return log2_order(n) - 2;
}

int order_from_tr_size(int code) {
  if (code < 0 || code > 4) throw ValidationError("tr_size " + std::to_string(code) + " is not defined");
  return 4 << code;
}

int MacArrayState::multiplications() const { return std::popcount(active_mask); }

const char* PortTrace::csv_header() {
  return "clk,rst_n,input_enable,avc_vvc,tr_type,tr_size,tr_dir,data_in,data_enable,data_out_inter,data_out_fin";
}

std::string PortTrace::to_csv() const {
  std::string out = csv_header();
  out += '\n';
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const PortState& r = rows[t];
    out += std::to_string(t);
    out += ',';
    out += r.rst_n ? '1' : '0';
    out += ',';
    out += r.input_enable ? '1' : '0';
    out += ',';
    out += r.avc_vvc ? '1' : '0';
    out += ',';
    out += std::to_string(r.tr_type);
    out += ',';
    out += std::to_string(r.tr_size);
    out += ',';
    out += std::to_string(r.tr_dir);
    out += ',';
    out += bus_hex(r.data_in);
    out += ',';
    out += r.data_enable ? '1' : '0';
    out += ',';
    out += bus_hex(r.data_out_inter);
    out += ',';
    out += bus_hex(r.data_out_fin);
    out += '\n';
  }
  return out;
}

MacSchedule build_schedule(const RomImage& rom, TransformKind kind, int n) {
  require_valid_order(kind, n);
  MacSchedule sch;
  sch.kind = kind;
  sch.n = n;
  const int retained = retained_count(kind, n);
  const bool sel = !zeroed_input(kind, n);

  if (kind != TransformKind::DCT2) {
    const RomSegment& seg = need_segment(rom, TransformKind::DST7, n);
    sch.accumulators = n;
    if (seg.wide()) {
      for (int r = 0; r < retained; ++r) sch.steps.push_back(wide_step(rom, seg, r, r, 0));
    } else {
      for (int p = 0; p < n / 2; ++p) {
        MacStep s = split_step(rom, seg, p);
        s.in = {2 * p, 2 * p + 1};
        push_paired(sch.steps, s, sel, retained);
      }
    }
    return sch;
  }

  // DCT2: odd banks from the largest order down, then the 4-point core.
  int offset = 0;
  for (int m = n; m >= 8; m /= 2) {
    sch.odd_banks.emplace_back(m, offset);
    offset += m / 2;
  }
  sch.e2 = offset;
  sch.o2 = offset + 2;
  sch.accumulators = offset + 4;

  for (const auto& [m, bank] : sch.odd_banks) {
    const RomSegment& seg = need_segment(rom, TransformKind::DCT2, m);
    const int stride = n / m;
    if (seg.wide()) {
      for (int r = 0; r < seg.rows; ++r) {
        const int idx = stride * (2 * r + 1);
        if (idx < retained) sch.steps.push_back(wide_step(rom, seg, r, idx, bank));
      }
      continue;
    }
    for (int p = 0; p < seg.rows / 2; ++p) {
      MacStep s = split_step(rom, seg, p);
      s.in = {stride * (4 * p + 1), stride * (4 * p + 3)};
      s.acc_base = {bank, bank};
      if (s.in[0] >= retained && s.in[1] >= retained) continue;
      push_paired(sch.steps, s, sel, retained);
    }
  }
  const RomSegment& core = need_segment(rom, TransformKind::DCT2, 4);
  const int stride = n / 4;
  for (int p = 0; p < 2; ++p) {
    MacStep s = split_step(rom, core, p);
    s.in = {stride * 2 * p, stride * (2 * p + 1)};
    s.acc_base = {sch.e2, sch.o2};
    if (s.in[0] >= retained && s.in[1] >= retained) continue;
    push_paired(sch.steps, s, sel, retained);
  }
  if (static_cast<int>(sch.steps.size()) > n / 2)
    throw PackingError("MAC schedule exceeds the input window");
  return sch;
}

MtsCore::MtsCore(const RomImage& rom, int bit_depth) : rom_(&rom), bit_depth_(bit_depth) {
  if (bit_depth != 8 && bit_depth != 10) throw ValidationError("bit depth must be 8 or 10");
  for (auto k : kAllKinds)
    for (int n : kAllOrders)
      if (is_valid_order(k, n))
        schedules_.emplace(std::make_pair(static_cast<int>(k), n), build_schedule(rom, k, n));
}

const MacSchedule& MtsCore::schedule(TransformKind kind, int n) const {
  return schedules_.at({static_cast<int>(kind), n});
}

bool MtsCore::idle() const { return !loading_ && mac_queue_.empty() && delay_line_.empty(); }

void MtsCore::finish_job(Job& job) {
  const MacSchedule& sch = schedule(job.cfg.kind, job.cfg.n);
  const int n = job.cfg.n;
  std::vector<std::int64_t> y(static_cast<std::size_t>(n));
  if (job.cfg.kind == TransformKind::DCT2) {
    const auto& a = job.acc;
    const auto e2 = static_cast<std::size_t>(sch.e2);
    const auto o2 = static_cast<std::size_t>(sch.o2);
    std::vector<std::int64_t> e = {a[e2] + a[o2], a[e2 + 1] + a[o2 + 1], a[e2 + 1] - a[o2 + 1], a[e2] - a[o2]};
    for (auto it = sch.odd_banks.rbegin(); it != sch.odd_banks.rend(); ++it) {
      const int m = it->first;
      const auto bank = static_cast<std::size_t>(it->second);
      std::vector<std::int64_t> next(static_cast<std::size_t>(m));
      for (int j = 0; j < m / 2; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        next[uj] = e[uj] + a[bank + uj];
        next[static_cast<std::size_t>(m - 1 - j)] = e[uj] - a[bank + uj];
      }
      e = std::move(next);
    }
    y = std::move(e);
  } else {
    const bool dct8 = job.cfg.kind == TransformKind::DCT8;
    for (int j = 0; j < n; ++j) y[static_cast<std::size_t>(j)] = job.acc[static_cast<std::size_t>(dct8 ? n - 1 - j : j)];
  }

  const int shift = job.cfg.dir == Direction::Vertical ? kInverseShiftStage1 : 20 - bit_depth_;
  const std::int64_t ready = cycle_ + kPipelineDepth;
  const std::int64_t due = job.first_data_cycle + kLatencyCycles;
  if (ready > due) throw StallError("result ready after its output slot");
  for (int p = 0; p < n / 2; ++p) {
    OutPair op;
    op.v = {static_cast<std::int16_t>(clip16(round_shift(y[static_cast<std::size_t>(2 * p)], shift))),
            static_cast<std::int16_t>(clip16(round_shift(y[static_cast<std::size_t>(2 * p + 1)], shift)))};
    op.dir = job.cfg.dir;
    op.last = p == n / 2 - 1;
    if (!delay_line_.emplace(due + p, op).second) throw StallError("two results compete for one output slot");
  }
}

void MtsCore::tick(PortState& io) {
  io.data_enable = false;
  io.data_out_inter = {0, 0};
  io.data_out_fin = {0, 0};
  out_valid_ = false;

  if (!io.rst_n) {
    loading_.reset();
    load_cycles_left_ = 0;
    mac_queue_.clear();
    delay_line_.clear();
    ++cycle_;
    return;
  }

  // Load stage: data_in belongs to the vector launched by an earlier pulse.
  if (loading_) {
    Job& job = *loading_;
    const bool dct8 = job.cfg.kind == TransformKind::DCT8;
    auto push = [&](std::int32_t v) {
      // Pre-processing for DCT8: alternate input signs.
      const bool odd = job.in.size() % 2 == 1;
      job.in.push_back(dct8 && odd ? -v : v);
    };
    if (zeroed_input(job.cfg.kind, job.cfg.n)) {
      if (io.data_in[0] != io.data_in[1])
        throw ValidationError("both lanes must carry the same sample while sel is disabled");
      push(io.data_in[0]);
    } else {
      push(io.data_in[0]);
      push(io.data_in[1]);
    }
    if (--load_cycles_left_ == 0) {
      job.start_cycle = cycle_ + 1;
      job.acc.assign(static_cast<std::size_t>(schedule(job.cfg.kind, job.cfg.n).accumulators), 0);
      mac_queue_.push_back(std::move(job));
      loading_.reset();
    }
  }

  if (io.input_enable) {
    if (!io.avc_vvc) throw ValidationError("avc_vvc = 0 (AVC cores) is not modeled");
    const auto kind = kind_from_code(io.tr_type);
    if (!kind) throw ValidationError("tr_type " + std::to_string(io.tr_type) + " is not defined");
    const int n = order_from_tr_size(io.tr_size);
    if (!is_valid_order(*kind, n))
      throw ValidationError("tr_size " + std::to_string(io.tr_size) + " is not valid with tr_type " +
                            std::to_string(io.tr_type));
    if (io.tr_dir > 1) throw ValidationError("tr_dir must be 0 or 1");
    if (loading_) throw ValidationError("input_enable while the previous vector is still loading");
    Job job;
    job.cfg = {*kind, n, static_cast<Direction>(io.tr_dir)};
    job.first_data_cycle = cycle_ + 1;
    job.in.reserve(static_cast<std::size_t>(retained_count(*kind, n)));
    loading_ = std::move(job);
    load_cycles_left_ = n / 2;
    if (zeroed_input(*kind, n)) load_cycles_left_ = retained_count(*kind, n);
  }

  // MAC stage.
  MacArrayState st;
  if (!mac_queue_.empty() && mac_queue_.front().start_cycle <= cycle_) {
    Job& job = mac_queue_.front();
    const MacSchedule& sch = schedule(job.cfg.kind, job.cfg.n);
    const MacStep& step = sch.steps[job.step];
    const RomWord& word = rom_->words[static_cast<std::size_t>(step.word)];
    st.sel = step.sel;
    st.coeff_column = step.word;
    for (std::size_t lane = 0; lane < 2; ++lane) {
      if (step.len[lane] == 0) continue;
      const std::int32_t x = job.in[static_cast<std::size_t>(step.in[lane])];
      st.lanes[lane] = static_cast<std::int16_t>(x);
      for (int e = 0; e < step.len[lane]; ++e) {
        const int slot = step.slot_base[lane] + e;
        const std::int32_t prod = x * word[static_cast<std::size_t>(slot)];
        st.mult_products[static_cast<std::size_t>(slot)] = prod;
        st.active_mask |= 1u << slot;
        std::int64_t& acc = job.acc[static_cast<std::size_t>(step.acc_base[lane] + e)];
        acc += prod;
        if (acc > std::numeric_limits<std::int32_t>::max() || acc < std::numeric_limits<std::int32_t>::min())
          throw std::overflow_error("accumulator exceeds 32 bits");
        max_acc_ = std::max(max_acc_, acc < 0 ? -acc : acc);
      }
    }
    if (!step.sel) st.lanes[1] = st.lanes[0];
    max_mults_ = std::max(max_mults_, st.multiplications());
    if (++job.step == sch.steps.size()) {
      finish_job(job);
      mac_queue_.pop_front();
    }
  }
  if (observer_) observer_(cycle_, st);

  // Delay line output.
  if (auto it = delay_line_.begin(); it != delay_line_.end() && it->first <= cycle_) {
    if (it->first < cycle_) throw StallError("output slot missed");
    auto& bus = it->second.dir == Direction::Vertical ? io.data_out_inter : io.data_out_fin;
    bus = it->second.v;
    io.data_enable = it->second.last;
    out_valid_ = true;
    delay_line_.erase(it);
  }
  ++cycle_;
}

BlockSimResult simulate_block(const TransformSpec& spec, Direction direction,
                              std::span<const std::int32_t> coeff_stream, bool keep_trace,
                              const RomImage& rom) {
  spec.validate();
  const TransformKind kind = direction == Direction::Vertical ? spec.kind_v : spec.kind_h;
  const int n = direction == Direction::Vertical ? spec.size_v : spec.size_h;
  const int retained = retained_count(kind, n);
  if (coeff_stream.empty() || coeff_stream.size() % static_cast<std::size_t>(retained) != 0) {
    throw DomainError("coefficient stream of " + std::to_string(coeff_stream.size()) +
                      " samples is not a whole number of " + std::to_string(retained) + "-sample vectors");
  }
  for (auto c : coeff_stream)
    if (c < kCoeffMin || c > kCoeffMax) throw DomainError("coefficient exceeds 16-bit range");
  const std::int64_t vectors = static_cast<std::int64_t>(coeff_stream.size()) / retained;
  const int window = n / 2;
  const bool zeroed = retained < n;

  MtsCore core(rom, spec.bit_depth);
  BlockSimResult res;
  res.outputs.reserve(static_cast<std::size_t>(vectors * n));
  CycleReport& rep = res.report;
  const std::int64_t last_cycle = kLatencyCycles + vectors * window;
  std::int64_t first_out = -1;
  for (std::int64_t t = 0; t <= last_cycle; ++t) {
    PortState io;
    io.tr_type = static_cast<std::uint8_t>(static_cast<int>(kind));
    io.tr_size = static_cast<std::uint8_t>(tr_size_code(n));
    io.tr_dir = static_cast<std::uint8_t>(static_cast<int>(direction));
    io.input_enable = t % window == 0 && t / window < vectors;
    if (t >= 1 && (t - 1) / window < vectors) {
      const std::size_t v = static_cast<std::size_t>((t - 1) / window);
      const std::size_t local = static_cast<std::size_t>((t - 1) % window);
      const std::size_t base = v * static_cast<std::size_t>(retained);
      if (zeroed) {
        const auto s = static_cast<std::int16_t>(coeff_stream[base + local]);
        io.data_in = {s, s};
        rep.input_samples += 1;
      } else {
        io.data_in = {static_cast<std::int16_t>(coeff_stream[base + 2 * local]),
                      static_cast<std::int16_t>(coeff_stream[base + 2 * local + 1])};
        rep.input_samples += 2;
      }
      ++rep.input_cycles;
    }
    core.tick(io);
    if (core.output_valid()) {
      if (first_out < 0) first_out = t;
      const auto& bus = direction == Direction::Vertical ? io.data_out_inter : io.data_out_fin;
      res.outputs.push_back(bus[0]);
      res.outputs.push_back(bus[1]);
      ++rep.output_cycles;
      rep.output_samples += 2;
      const bool expect_last = res.outputs.size() % static_cast<std::size_t>(n) == 0;
      if (io.data_enable != expect_last) rep.stall_free = false;
    } else if (first_out >= 0 && res.outputs.size() < static_cast<std::size_t>(vectors * n)) {
      rep.stall_free = false;  // gap in the output stream
    }
    if (keep_trace) res.trace.rows.push_back(io);
  }
  if (!core.idle() || res.outputs.size() != static_cast<std::size_t>(vectors * n))
    throw StallError("engine did not drain within the latency contract");
  rep.total_cycles = last_cycle + 1;
  rep.latency_cycles = first_out - 1;
  rep.max_multiplications = core.max_multiplications();
  rep.max_abs_accumulator = core.max_abs_accumulator();
  return res;
}

Sim2dResult simulate_2d(const TransformSpec& spec, const Block& coeffs, bool keep_trace, const RomImage& rom) {
  const Block full = expand_coefficients(spec, coeffs);
  const int w = spec.size_h;
  const int h = spec.size_v;
  const int rw = retained_count(spec.kind_h, w);
  const int rh = retained_count(spec.kind_v, h);

  std::vector<std::int32_t> stream;
  stream.reserve(static_cast<std::size_t>(w * rh));
  for (int c = 0; c < w; ++c)
    for (int r = 0; r < rh; ++r) stream.push_back(full.at(r, c));
  BlockSimResult vert = simulate_block(spec, Direction::Vertical, stream, keep_trace, rom);

  // Transpose memory: column c of the vertical pass becomes input row c.
  Block inter = Block::zeros(w, h, 16);
  for (int c = 0; c < w; ++c)
    for (int r = 0; r < h; ++r) inter.at(r, c) = vert.outputs[static_cast<std::size_t>(c * h + r)];

  stream.clear();
  for (int r = 0; r < h; ++r) {
    for (int c = rw; c < w; ++c)
      if (inter.at(r, c) != 0) throw DomainError("internal: zeroed column produced nonzero intermediate");
    for (int c = 0; c < rw; ++c) stream.push_back(inter.at(r, c));
  }
  BlockSimResult horz = simulate_block(spec, Direction::Horizontal, stream, keep_trace, rom);

  Sim2dResult res;
  res.block = Block::zeros(w, h, 16);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) res.block.at(r, c) = horz.outputs[static_cast<std::size_t>(r * w + c)];
  res.vertical = vert.report;
  res.horizontal = horz.report;
  CycleReport& t = res.total;
  t.total_cycles = vert.report.total_cycles + horz.report.total_cycles;
  t.latency_cycles = vert.report.latency_cycles;
  t.input_cycles = vert.report.input_cycles + horz.report.input_cycles;
  t.output_cycles = vert.report.output_cycles + horz.report.output_cycles;
  t.output_samples = vert.report.output_samples + horz.report.output_samples;
  t.input_samples = vert.report.input_samples + horz.report.input_samples;
  t.max_multiplications = std::max(vert.report.max_multiplications, horz.report.max_multiplications);
  t.max_abs_accumulator = std::max(vert.report.max_abs_accumulator, horz.report.max_abs_accumulator);
  t.stall_free = vert.report.stall_free && horz.report.stall_free;
  res.transpose_peak_words = static_cast<std::int64_t>(w) * h;
  if (keep_trace) {
    res.trace = std::move(vert.trace);
    res.trace.rows.insert(res.trace.rows.end(), horz.trace.rows.begin(), horz.trace.rows.end());
  }
  return res;
}

}  // namespace mts
