// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "nifti.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace gliomics {

namespace {

#pragma pack(push, 1)
struct Nifti1Header {
  std::int32_t sizeof_hdr;    // must be 348
  char data_type[10];
  char db_name[18];
  std::int32_t extents;
  std::int16_t session_error;
  char regular;
  char dim_info;
  std::int16_t dim[8];
  float intent_p1, intent_p2, intent_p3;
  std::int16_t intent_code;
  std::int16_t datatype;
  std::int16_t bitpix;
  std::int16_t slice_start;
  float pixdim[8];
  float vox_offset;
  float scl_slope;
  float scl_inter;
  std::int16_t slice_end;
  char slice_code;
  char xyzt_units;
  float cal_max, cal_min;
  float slice_duration;
  float toffset;
  std::int32_t glmax, glmin;
  char descrip[80];
  char aux_file[24];
  std::int16_t qform_code;
  std::int16_t sform_code;
  float quatern_b, quatern_c, quatern_d;
  float qoffset_x, qoffset_y, qoffset_z;
  float srow_x[4];
  float srow_y[4];
  float srow_z[4];
  char intent_name[16];
  char magic[4];
};
#pragma pack(pop)

static_assert(sizeof(Nifti1Header) == 348, "NIfTI-1 header must be 348 bytes");

constexpr std::int16_t kDtUint8 = 2;
constexpr std::int16_t kDtInt16 = 4;
constexpr std::int16_t kDtFloat32 = 16;

std::vector<unsigned char> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorKind::io, "read failed: " + path);
  return bytes;
}

bool is_gzip(const std::vector<unsigned char>& bytes) {
  return bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b;
}

std::vector<unsigned char> gunzip(const std::vector<unsigned char>& in,
                                  const std::string& path) {
  z_stream strm{};
  if (inflateInit2(&strm, 15 + 32) != Z_OK)
    fail(ErrorKind::io, "zlib inflate init failed");

  std::vector<unsigned char> out;
  out.reserve(in.size() * 4);
  std::vector<unsigned char> buf(1 << 16);
  strm.next_in = const_cast<unsigned char*>(in.data());
  strm.avail_in = static_cast<uInt>(in.size());
  int rc = Z_OK;
  do {
    strm.next_out = buf.data();
    strm.avail_out = static_cast<uInt>(buf.size());
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      fail(ErrorKind::format, "corrupt gzip stream: " + path);
    }
    out.insert(out.end(), buf.data(), buf.data() + (buf.size() - strm.avail_out));
  } while (rc != Z_STREAM_END && (strm.avail_in > 0 || strm.avail_out == 0));
  inflateEnd(&strm);
  if (rc != Z_STREAM_END)
    fail(ErrorKind::format, "truncated gzip stream: " + path);
  return out;
}

std::vector<unsigned char> gzip_compress(const unsigned char* data,
                                         std::size_t size) {
  z_stream strm{};
  if (deflateInit2(&strm, 6, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK)
    fail(ErrorKind::io, "zlib deflate init failed");
  // Fixed header fields keep byte output reproducible run to run.
  gz_header head{};
  head.time = 0;
  head.os = 255;
  deflateSetHeader(&strm, &head);

  std::vector<unsigned char> out;
  std::vector<unsigned char> buf(1 << 16);
  strm.next_in = const_cast<unsigned char*>(data);
  strm.avail_in = static_cast<uInt>(size);
  int rc = Z_OK;
  do {
    strm.next_out = buf.data();
    strm.avail_out = static_cast<uInt>(buf.size());
    rc = deflate(&strm, Z_FINISH);
    out.insert(out.end(), buf.data(), buf.data() + (buf.size() - strm.avail_out));
  } while (rc != Z_STREAM_END);
  deflateEnd(&strm);
  return out;
}

void swap_bytes(void* p, std::size_t elem_size, std::size_t count) {
  auto* b = static_cast<unsigned char*>(p);
  for (std::size_t i = 0; i < count; ++i) {
    unsigned char* e = b + i * elem_size;
    for (std::size_t a = 0, z = elem_size - 1; a < z; ++a, --z)
      std::swap(e[a], e[z]);
  }
}

void swap_header(Nifti1Header& h) {
  swap_bytes(&h.sizeof_hdr, 4, 1);
  swap_bytes(&h.extents, 4, 1);
  swap_bytes(&h.session_error, 2, 1);
  swap_bytes(h.dim, 2, 8);
  swap_bytes(&h.intent_p1, 4, 3);
  swap_bytes(&h.intent_code, 2, 1);
  swap_bytes(&h.datatype, 2, 1);
  swap_bytes(&h.bitpix, 2, 1);
  swap_bytes(&h.slice_start, 2, 1);
  swap_bytes(h.pixdim, 4, 8);
  swap_bytes(&h.vox_offset, 4, 1);
  swap_bytes(&h.scl_slope, 4, 1);
  swap_bytes(&h.scl_inter, 4, 1);
  swap_bytes(&h.slice_end, 2, 1);
  swap_bytes(&h.cal_max, 4, 1);
  swap_bytes(&h.cal_min, 4, 1);
  swap_bytes(&h.slice_duration, 4, 1);
  swap_bytes(&h.toffset, 4, 1);
  swap_bytes(&h.glmax, 4, 1);
  swap_bytes(&h.glmin, 4, 1);
  swap_bytes(&h.qform_code, 2, 1);
  swap_bytes(&h.sform_code, 2, 1);
  swap_bytes(&h.quatern_b, 4, 6);  // quatern_b..qoffset_z
  swap_bytes(h.srow_x, 4, 4);
  swap_bytes(h.srow_y, 4, 4);
  swap_bytes(h.srow_z, 4, 4);
}

struct Decoded {
  VolumeGeometry geom;
  std::int16_t datatype = 0;
  std::vector<double> values;  // raw values, possibly scaled
  bool integral = true;
};

Decoded decode(const std::string& path) {
  std::vector<unsigned char> bytes = read_file_bytes(path);
  if (is_gzip(bytes)) bytes = gunzip(bytes, path);

  if (bytes.size() < sizeof(Nifti1Header))
    fail(ErrorKind::format, "file too small for a NIfTI-1 header: " + path);

  Nifti1Header h{};
  std::memcpy(&h, bytes.data(), sizeof(h));

  bool swapped = false;
  if (h.sizeof_hdr != 348) {
    Nifti1Header s = h;
    swap_header(s);
    if (s.sizeof_hdr != 348)
      fail(ErrorKind::format,
           "bad NIfTI-1 header field sizeof_hdr (expected 348): " + path);
    h = s;
    swapped = true;
  }

  if (std::memcmp(h.magic, "n+1", 4) != 0) {
    if (std::memcmp(h.magic, "ni1", 4) == 0)
      fail(ErrorKind::unsupported,
           "two-file NIfTI (magic \"ni1\") is not supported: " + path);
    fail(ErrorKind::format, "bad NIfTI-1 header field magic: " + path);
  }

  const int ndim = h.dim[0];
  const bool dim_ok =
      (ndim >= 1 && ndim <= 3) ||
      (ndim == 4 && h.dim[4] <= 1);  // tolerate degenerate 4th axis
  if (!dim_ok)
    fail(ErrorKind::unsupported,
         "bad NIfTI-1 header field dim[0] (only 3D volumes supported): " + path);

  VolumeGeometry g;
  g.nx = h.dim[1];
  g.ny = ndim >= 2 ? h.dim[2] : 1;
  g.nz = ndim >= 3 ? h.dim[3] : 1;
  if (g.nx < 1 || g.ny < 1 || g.nz < 1)
    fail(ErrorKind::format, "bad NIfTI-1 header field dim[1..3]: " + path);

  g.sx = h.pixdim[1];
  g.sy = ndim >= 2 ? h.pixdim[2] : 1.0;
  g.sz = ndim >= 3 ? h.pixdim[3] : 1.0;
  if (!(g.sx > 0.0) || !(g.sy > 0.0) || !(g.sz > 0.0))
    fail(ErrorKind::format, "bad NIfTI-1 header field pixdim[1..3]: " + path);

  if (h.sform_code > 0) {
    g.origin = {h.srow_x[3], h.srow_y[3], h.srow_z[3]};
  } else if (h.qform_code > 0) {
    g.origin = {h.qoffset_x, h.qoffset_y, h.qoffset_z};
  }

  std::size_t elem = 0;
  switch (h.datatype) {
    case kDtUint8: elem = 1; break;
    case kDtInt16: elem = 2; break;
    case kDtFloat32: elem = 4; break;
    default: {
      std::ostringstream os;
      os << "unsupported NIfTI-1 datatype code " << h.datatype
         << " (supported: 2, 4, 16): " << path;
      fail(ErrorKind::unsupported, os.str());
    }
  }

  const auto offset = static_cast<std::size_t>(h.vox_offset);
  if (h.vox_offset < 348.0f)
    fail(ErrorKind::format, "bad NIfTI-1 header field vox_offset: " + path);
  const std::size_t n = g.voxel_count();
  if (bytes.size() < offset + n * elem)
    fail(ErrorKind::format, "payload shorter than dim/vox_offset imply: " + path);

  const unsigned char* payload = bytes.data() + offset;
  Decoded out;
  out.geom = g;
  out.datatype = h.datatype;
  out.values.resize(n);

  const bool has_scaling = h.scl_slope != 0.0f && h.scl_slope != 1.0f;
  const bool has_offset = h.scl_inter != 0.0f;

  switch (h.datatype) {
    case kDtUint8:
      for (std::size_t i = 0; i < n; ++i) out.values[i] = payload[i];
      break;
    case kDtInt16: {
      std::vector<std::int16_t> raw(n);
      std::memcpy(raw.data(), payload, n * 2);
      if (swapped) swap_bytes(raw.data(), 2, n);
      for (std::size_t i = 0; i < n; ++i) out.values[i] = raw[i];
      break;
    }
    case kDtFloat32: {
      std::vector<float> raw(n);
      std::memcpy(raw.data(), payload, n * 4);
      if (swapped) swap_bytes(raw.data(), 4, n);
      for (std::size_t i = 0; i < n; ++i) out.values[i] = raw[i];
      out.integral = false;
      break;
    }
  }

  if (has_scaling || has_offset) {
    const double slope = h.scl_slope == 0.0f ? 1.0 : h.scl_slope;
    for (double& v : out.values) v = v * slope + h.scl_inter;
    out.integral = false;
  }

  for (double v : out.values)
    if (!std::isfinite(v))
      fail(ErrorKind::validation, "volume contains non-finite values: " + path);

  return out;
}

LabelVolume to_label_volume(const Decoded& d, const std::string& path) {
  LabelVolume vol(d.geom);
  std::set<double> bad;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    const double v = d.values[i];
    if (v == 0.0 || v == 1.0 || v == 2.0 || v == 4.0) {
      vol.data[i] = static_cast<std::uint8_t>(v);
    } else {
      bad.insert(v);
    }
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << "label volume " << path << " contains values outside {0,1,2,4}:";
    std::size_t shown = 0;
    for (double v : bad) {
      os << ' ' << v;
      if (++shown == 8) {
        os << " ...";
        break;
      }
    }
    fail(ErrorKind::validation, os.str());
  }
  return vol;
}

bool looks_like_labels(const Decoded& d) {
  if (!d.integral) return false;
  for (double v : d.values)
    if (v != 0.0 && v != 1.0 && v != 2.0 && v != 4.0) return false;
  return true;
}

Nifti1Header make_header(const VolumeGeometry& g, std::int16_t datatype,
                         std::int16_t bitpix) {
  Nifti1Header h{};
  h.sizeof_hdr = 348;
  h.regular = 'r';
  h.dim[0] = 3;
  h.dim[1] = static_cast<std::int16_t>(g.nx);
  h.dim[2] = static_cast<std::int16_t>(g.ny);
  h.dim[3] = static_cast<std::int16_t>(g.nz);
  for (int i = 4; i < 8; ++i) h.dim[i] = 1;
  h.datatype = datatype;
  h.bitpix = bitpix;
  h.pixdim[0] = 1.0f;
  h.pixdim[1] = static_cast<float>(g.sx);
  h.pixdim[2] = static_cast<float>(g.sy);
  h.pixdim[3] = static_cast<float>(g.sz);
  h.vox_offset = 352.0f;
  h.scl_slope = 1.0f;
  h.xyzt_units = 2;  // millimetres
  h.sform_code = 1;
  h.srow_x[0] = static_cast<float>(g.sx);
  h.srow_x[3] = static_cast<float>(g.origin.x);
  h.srow_y[1] = static_cast<float>(g.sy);
  h.srow_y[3] = static_cast<float>(g.origin.y);
  h.srow_z[2] = static_cast<float>(g.sz);
  h.srow_z[3] = static_cast<float>(g.origin.z);
  std::memcpy(h.magic, "n+1", 4);
  return h;
}

void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

void write_nifti(const VolumeGeometry& g, std::int16_t datatype,
                 std::int16_t bitpix, const unsigned char* payload,
                 std::size_t payload_size, const std::string& path) {
  if (g.nx > 32767 || g.ny > 32767 || g.nz > 32767)
    fail(ErrorKind::validation, "volume too large for NIfTI-1 dim fields");
  const Nifti1Header h = make_header(g, datatype, bitpix);

  std::vector<unsigned char> bytes(352 + payload_size, 0);
  std::memcpy(bytes.data(), &h, sizeof(h));
  std::memcpy(bytes.data() + 352, payload, payload_size);

  if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
    write_bytes(path, gzip_compress(bytes.data(), bytes.size()));
  } else {
    write_bytes(path, bytes);
  }
}

}  // namespace

VolumeVariant read_volume(const std::string& path) {
  const Decoded d = decode(path);
  if (looks_like_labels(d)) return to_label_volume(d, path);
  IntensityVolume vol(d.geom);
  for (std::size_t i = 0; i < d.values.size(); ++i)
    vol.data[i] = static_cast<float>(d.values[i]);
  return vol;
}

LabelVolume read_label_volume(const std::string& path) {
  const Decoded d = decode(path);
  return to_label_volume(d, path);
}

IntensityVolume read_intensity_volume(const std::string& path) {
  const Decoded d = decode(path);
  IntensityVolume vol(d.geom);
  for (std::size_t i = 0; i < d.values.size(); ++i)
    vol.data[i] = static_cast<float>(d.values[i]);
  return vol;
}

void write_volume(const LabelVolume& vol, const std::string& path) {
  write_nifti(vol.geom, kDtUint8, 8, vol.data.data(), vol.data.size(), path);
}

void write_volume(const IntensityVolume& vol, const std::string& path) {
  write_nifti(vol.geom, kDtFloat32, 32,
              reinterpret_cast<const unsigned char*>(vol.data.data()),
              vol.data.size() * 4, path);
}

}  // namespace gliomics
