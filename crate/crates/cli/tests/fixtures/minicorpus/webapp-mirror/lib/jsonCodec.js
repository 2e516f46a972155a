// Defensive JSON parsing helpers used across handlers.
function decodeJsonBody(rawBody, fallbackValue) {
  try {
    return JSON.parse(rawBody);
  } catch (parseError) {
    return fallbackValue;
  }
}

function encodeJsonBody(payloadObject) {
  return JSON.stringify(payloadObject, null, 2);
}

module.exports = { decodeJsonBody, encodeJsonBody };
