// Reads "key=value" config lines with environment overrides.
function parseConfigText(configText) {
  const configValues = {};
  for (const rawLine of configText.split("\n")) {
    const trimmedLine = rawLine.trim();
    if (trimmedLine === "" || trimmedLine.startsWith("#")) continue;
    const separatorIndex = trimmedLine.indexOf("=");
    if (separatorIndex < 0) continue;
    const configKey = trimmedLine.slice(0, separatorIndex).trim();
    const configValue = trimmedLine.slice(separatorIndex + 1).trim();
    configValues[configKey] = configValue;
  }
  return configValues;
}

function overrideFromEnvironment(configValues, environmentTable) {
  const mergedValues = { ...configValues };
  for (const [environmentKey, environmentValue] of Object.entries(environmentTable)) {
    mergedValues[environmentKey.toLowerCase()] = environmentValue;
  }
  return mergedValues;
}

module.exports = { parseConfigText, overrideFromEnvironment };
