#pragma once

#define TVDEBLUR_VERSION "0.1.0"
