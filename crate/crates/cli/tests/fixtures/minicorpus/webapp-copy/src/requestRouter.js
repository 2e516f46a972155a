// Maps URL prefixes to handler callbacks.
function createRequestRouter() {
  const routeTable = new Map();
  return {
    registerRoute(routePrefix, handlerCallback) {
      routeTable.set(routePrefix, handlerCallback);
    },
    dispatchRoute(requestPath, responseWriter) {
      for (const [routePrefix, handlerCallback] of routeTable) {
        if (requestPath.startsWith(routePrefix)) {
          return handlerCallback(requestPath, responseWriter);
        }
      }
      responseWriter.writeStatus(404, "route not found");
    },
  };
}

module.exports = { createRequestRouter };
