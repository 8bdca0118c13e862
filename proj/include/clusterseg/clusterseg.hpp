#pragma once

#include "clusterseg/fcm.hpp"
#include "clusterseg/formats.hpp"
#include "clusterseg/image.hpp"
#include "clusterseg/kmeans.hpp"
#include "clusterseg/pgm.hpp"
#include "clusterseg/phantom.hpp"
#include "clusterseg/segment.hpp"
