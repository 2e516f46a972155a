// Tiny string template renderer: "{{placeholder}}" substitution.
function renderTemplate(templateText, contextValues) {
  return templateText.replace(/\{\{(\w+)\}\}/g, (wholeMatch, placeholderName) => {
    const replacementValue = contextValues[placeholderName];
    return replacementValue === undefined ? wholeMatch : String(replacementValue);
  });
}

function compileTemplate(templateText) {
  return (contextValues) => renderTemplate(templateText, contextValues);
}

module.exports = { renderTemplate, compileTemplate };
